//! Syntax tree, source positions, and diagnostics for the text format.
//!
//! The printer lives here too: `render` turns a file back into canonical
//! source, and parse → print → parse is the identity on the tree.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Span {
        Span { line, col }
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Severity {
    Error,
    Warning,
}

/// A parse or validation message anchored to a source position.
#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: Span,
    pub message: String,
}

impl Diagnostic {
    pub fn error(span: Span, message: impl Into<String>) -> Diagnostic {
        Diagnostic { severity: Severity::Error, span, message: message.into() }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}: {} at {}", sev, self.message, self.span)
    }
}

/// An identifier with its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

/// A reference to an arrow of a named category: a label or `id(object)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArrowRef {
    Label(Name),
    IdentityAt(Name),
}

impl ArrowRef {
    pub fn span(&self) -> Span {
        match self {
            ArrowRef::Label(n) | ArrowRef::IdentityAt(n) => n.span,
        }
    }
}

/// One generator in a gluing cover: an arrow or an object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenRef {
    Arrow(ArrowRef),
    Object(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    pub decls: Vec<Decl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Category(CategoryDecl),
    Poset(PosetDecl),
    Metric(MetricDecl),
    Language(LanguageDecl),
    Theory(TheoryDecl),
    Structure(StructureDecl),
    Probes(ProbesDecl),
    Functor(FunctorDecl),
}

impl Decl {
    pub fn name(&self) -> &Name {
        match self {
            Decl::Category(d) => &d.name,
            Decl::Poset(d) => &d.name,
            Decl::Metric(d) => &d.name,
            Decl::Language(d) => &d.name,
            Decl::Theory(d) => &d.name,
            Decl::Structure(d) => &d.name,
            Decl::Probes(d) => &d.name,
            Decl::Functor(d) => &d.name,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Decl::Category(_) => "category",
            Decl::Poset(_) => "poset",
            Decl::Metric(_) => "metric",
            Decl::Language(_) => "language",
            Decl::Theory(_) => "theory",
            Decl::Structure(_) => "structure",
            Decl::Probes(_) => "probes",
            Decl::Functor(_) => "functor",
        }
    }
}

/// `category C { objects a b; arrows f: a -> b; relations g.f = h; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryDecl {
    pub name: Name,
    pub objects: Vec<Name>,
    pub arrows: Vec<(Name, Name, Name)>,
    /// Paths in composition order: `g.f` applies `f` first.
    pub relations: Vec<(Vec<ArrowRef>, Vec<ArrowRef>)>,
}

/// `poset P { points a b; order a <= b; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetDecl {
    pub name: Name,
    pub points: Vec<Name>,
    pub order: Vec<(Name, Name)>,
}

/// `metric M { points x y; dist x y = 3/2; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricDecl {
    pub name: Name,
    pub points: Vec<Name>,
    pub dists: Vec<(Name, Name, Rational)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rational {
    Fin(i64, i64),
    Inf,
}

/// The base a language is for: categories by default, or `pos` / `met`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseKind {
    Cat,
    Pos,
    Met,
}

/// `language L for pos { op min : X2; }` /
/// `language L { op lim : D; op2 pr : lim => ev of D; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageDecl {
    pub name: Name,
    pub base: BaseKind,
    pub ops: Vec<OpDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpDecl {
    /// `op name : Arity;`
    Op { name: Name, arity: Name },
    /// `op2 name : dom => cod of Arity;`
    Op2 { name: Name, dom: Name, cod: Name, arity: Name },
}

/// `theory T over L { ... }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryDecl {
    pub name: Name,
    pub language: Name,
    pub judgements: Vec<JudgementDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum JudgementDecl {
    Defined { term: TermExpr, span: Span },
    Equal { lhs: TermExpr, rhs: TermExpr, span: Span },
    /// Pos sugar: `ineq t <= s;`
    Inequality { lhs: TermExpr, rhs: TermExpr, span: Span },
    /// Met sugar: `eq t = s within 1/2;`
    Within { lhs: TermExpr, rhs: TermExpr, eps: Rational, span: Span },
}

/// Surface term syntax (both the Cat and the concrete flavors).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermExpr {
    /// `obj(C.x)`
    Obj { cat: Name, object: Name },
    /// `arr(C.f)` / `arr(C.id(x))`
    Arr { cat: Name, arrow: ArrowRef },
    /// Bare symbol.
    Symbol(Name),
    /// `pow2(t)`
    Power2 { inner: Box<TermExpr>, span: Span },
    /// `glue(outer; Y by {gens}; gen -> t, ...)`
    Glue {
        outer: Box<TermExpr>,
        cover_cat: Name,
        gens: Vec<GenRef>,
        family: Vec<(GenRef, TermExpr)>,
        span: Span,
    },
    /// `comp(s, t)`
    Comp { lhs: Box<TermExpr>, rhs: Box<TermExpr>, span: Span },
    /// `inv(t)`
    Inv { inner: Box<TermExpr>, span: Span },
    /// `id(t)`
    IdOf { inner: Box<TermExpr>, span: Span },
    /// `src(t)` / `tgt(t)`
    Endpoint { inner: Box<TermExpr>, end: usize, span: Span },
    /// `pre(t; F)` — precompose along a declared functor.
    Precompose { inner: Box<TermExpr>, functor: Name, span: Span },
    /// `var(X.p)` — concrete variable.
    Var { arity: Name, point: Name },
    /// `f(t, ...)` — concrete application.
    Apply { sym: Name, args: Vec<TermExpr>, span: Span },
}

impl TermExpr {
    pub fn span(&self) -> Span {
        match self {
            TermExpr::Obj { cat, .. } => cat.span,
            TermExpr::Arr { cat, .. } => cat.span,
            TermExpr::Symbol(n) => n.span,
            TermExpr::Power2 { span, .. }
            | TermExpr::Glue { span, .. }
            | TermExpr::Comp { span, .. }
            | TermExpr::Inv { span, .. }
            | TermExpr::IdOf { span, .. }
            | TermExpr::Endpoint { span, .. }
            | TermExpr::Precompose { span, .. }
            | TermExpr::Apply { span, .. } => *span,
            TermExpr::Var { arity, .. } => arity.span,
        }
    }
}

/// `structure A over L on C { sym = functor { ... }; sym2 = nat { ... }; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureDecl {
    pub name: Name,
    pub language: Name,
    pub carrier: Name,
    pub interps: Vec<InterpDecl>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InterpDecl {
    /// Functor table keyed by the canonical enumeration of the arity's
    /// functor category: `obj i -> x;` entries then `arr j -> f;` entries.
    Functor { sym: Name, ob: Vec<(u32, Name)>, arr: Vec<(u32, ArrowRef)> },
    /// Component table for a 2-symbol: `i -> f;` per functor index.
    Nat { sym: Name, comps: Vec<(u32, ArrowRef)> },
    /// Concrete value table keyed by valuation tuples:
    /// `(a, b) -> c;` in point order.
    Table { sym: Name, rows: Vec<(Vec<Name>, Name)> },
}

impl InterpDecl {
    pub fn sym(&self) -> &Name {
        match self {
            InterpDecl::Functor { sym, .. }
            | InterpDecl::Nat { sym, .. }
            | InterpDecl::Table { sym, .. } => sym,
        }
    }
}

/// `probes P over L { A, B; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbesDecl {
    pub name: Name,
    pub language: Name,
    pub structures: Vec<Name>,
}

/// `functor F : C -> D { obj a -> x; arr f -> g; }`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorDecl {
    pub name: Name,
    pub dom: Name,
    pub cod: Name,
    pub ob: Vec<(Name, Name)>,
    pub arr: Vec<(ArrowRef, ArrowRef)>,
}

// ---- printer ----

fn write_arrowref(out: &mut String, a: &ArrowRef) {
    match a {
        ArrowRef::Label(n) => out.push_str(&n.text),
        ArrowRef::IdentityAt(n) => {
            out.push_str("id(");
            out.push_str(&n.text);
            out.push(')');
        }
    }
}

fn write_genref(out: &mut String, g: &GenRef) {
    match g {
        GenRef::Arrow(a) => write_arrowref(out, a),
        GenRef::Object(n) => {
            out.push_str("obj(");
            out.push_str(&n.text);
            out.push(')');
        }
    }
}

fn write_rational(out: &mut String, r: &Rational) {
    match r {
        Rational::Fin(n, 1) => out.push_str(&n.to_string()),
        Rational::Fin(n, d) => out.push_str(&format!("{n}/{d}")),
        Rational::Inf => out.push_str("inf"),
    }
}

pub fn render_term(out: &mut String, t: &TermExpr) {
    match t {
        TermExpr::Obj { cat, object } => {
            out.push_str(&format!("obj({}.{})", cat.text, object.text))
        }
        TermExpr::Arr { cat, arrow } => {
            out.push_str(&format!("arr({}.", cat.text));
            write_arrowref(out, arrow);
            out.push(')');
        }
        TermExpr::Symbol(n) => out.push_str(&n.text),
        TermExpr::Power2 { inner, .. } => {
            out.push_str("pow2(");
            render_term(out, inner);
            out.push(')');
        }
        TermExpr::Glue { outer, cover_cat, gens, family, .. } => {
            out.push_str("glue(");
            render_term(out, outer);
            out.push_str(&format!("; {} by {{", cover_cat.text));
            for (i, g) in gens.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_genref(out, g);
            }
            out.push('}');
            for (i, (g, m)) in family.iter().enumerate() {
                out.push_str(if i == 0 { "; " } else { ", " });
                write_genref(out, g);
                out.push_str(" -> ");
                render_term(out, m);
            }
            out.push(')');
        }
        TermExpr::Comp { lhs, rhs, .. } => {
            out.push_str("comp(");
            render_term(out, lhs);
            out.push_str(", ");
            render_term(out, rhs);
            out.push(')');
        }
        TermExpr::Inv { inner, .. } => {
            out.push_str("inv(");
            render_term(out, inner);
            out.push(')');
        }
        TermExpr::IdOf { inner, .. } => {
            out.push_str("id(");
            render_term(out, inner);
            out.push(')');
        }
        TermExpr::Endpoint { inner, end, .. } => {
            out.push_str(if *end == 0 { "src(" } else { "tgt(" });
            render_term(out, inner);
            out.push(')');
        }
        TermExpr::Precompose { inner, functor, .. } => {
            out.push_str("pre(");
            render_term(out, inner);
            out.push_str(&format!("; {})", functor.text));
        }
        TermExpr::Var { arity, point } => {
            out.push_str(&format!("var({}.{})", arity.text, point.text))
        }
        TermExpr::Apply { sym, args, .. } => {
            out.push_str(&sym.text);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render_term(out, a);
            }
            out.push(')');
        }
    }
}

/// Renders a file back to canonical source text.
pub fn render(file: &SourceFile) -> String {
    let mut out = String::new();
    for d in &file.decls {
        match d {
            Decl::Category(c) => {
                out.push_str(&format!("category {} {{\n  objects", c.name.text));
                for o in &c.objects {
                    out.push(' ');
                    out.push_str(&o.text);
                }
                out.push_str(";\n");
                if !c.arrows.is_empty() {
                    out.push_str("  arrows ");
                    for (i, (n, s, t)) in c.arrows.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&format!("{}: {} -> {}", n.text, s.text, t.text));
                    }
                    out.push_str(";\n");
                }
                if !c.relations.is_empty() {
                    out.push_str("  relations ");
                    for (i, (l, r)) in c.relations.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        for (k, seg) in l.iter().enumerate() {
                            if k > 0 {
                                out.push('.');
                            }
                            write_arrowref(&mut out, seg);
                        }
                        out.push_str(" = ");
                        for (k, seg) in r.iter().enumerate() {
                            if k > 0 {
                                out.push('.');
                            }
                            write_arrowref(&mut out, seg);
                        }
                    }
                    out.push_str(";\n");
                }
                out.push_str("}\n\n");
            }
            Decl::Poset(p) => {
                out.push_str(&format!("poset {} {{\n  points", p.name.text));
                for o in &p.points {
                    out.push(' ');
                    out.push_str(&o.text);
                }
                out.push_str(";\n");
                if !p.order.is_empty() {
                    out.push_str("  order ");
                    for (i, (a, b)) in p.order.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&format!("{} <= {}", a.text, b.text));
                    }
                    out.push_str(";\n");
                }
                out.push_str("}\n\n");
            }
            Decl::Metric(m) => {
                out.push_str(&format!("metric {} {{\n  points", m.name.text));
                for o in &m.points {
                    out.push(' ');
                    out.push_str(&o.text);
                }
                out.push_str(";\n");
                if !m.dists.is_empty() {
                    out.push_str("  dist ");
                    for (i, (a, b, r)) in m.dists.iter().enumerate() {
                        if i > 0 {
                            out.push_str(", ");
                        }
                        out.push_str(&format!("{} {} = ", a.text, b.text));
                        write_rational(&mut out, r);
                    }
                    out.push_str(";\n");
                }
                out.push_str("}\n\n");
            }
            Decl::Language(l) => {
                let base = match l.base {
                    BaseKind::Cat => String::new(),
                    BaseKind::Pos => " for pos".into(),
                    BaseKind::Met => " for met".into(),
                };
                out.push_str(&format!("language {}{} {{\n", l.name.text, base));
                for op in &l.ops {
                    match op {
                        OpDecl::Op { name, arity } => {
                            out.push_str(&format!("  op {} : {};\n", name.text, arity.text))
                        }
                        OpDecl::Op2 { name, dom, cod, arity } => out.push_str(&format!(
                            "  op2 {} : {} => {} of {};\n",
                            name.text, dom.text, cod.text, arity.text
                        )),
                    }
                }
                out.push_str("}\n\n");
            }
            Decl::Theory(t) => {
                out.push_str(&format!(
                    "theory {} over {} {{\n",
                    t.name.text, t.language.text
                ));
                for j in &t.judgements {
                    out.push_str("  ");
                    match j {
                        JudgementDecl::Defined { term, .. } => {
                            out.push_str("defined ");
                            render_term(&mut out, term);
                        }
                        JudgementDecl::Equal { lhs, rhs, .. } => {
                            out.push_str("eq ");
                            render_term(&mut out, lhs);
                            out.push_str(" = ");
                            render_term(&mut out, rhs);
                        }
                        JudgementDecl::Inequality { lhs, rhs, .. } => {
                            out.push_str("ineq ");
                            render_term(&mut out, lhs);
                            out.push_str(" <= ");
                            render_term(&mut out, rhs);
                        }
                        JudgementDecl::Within { lhs, rhs, eps, .. } => {
                            out.push_str("eq ");
                            render_term(&mut out, lhs);
                            out.push_str(" = ");
                            render_term(&mut out, rhs);
                            out.push_str(" within ");
                            write_rational(&mut out, eps);
                        }
                    }
                    out.push_str(";\n");
                }
                out.push_str("}\n\n");
            }
            Decl::Structure(s) => {
                out.push_str(&format!(
                    "structure {} over {} on {} {{\n",
                    s.name.text, s.language.text, s.carrier.text
                ));
                for i in &s.interps {
                    match i {
                        InterpDecl::Functor { sym, ob, arr } => {
                            out.push_str(&format!("  {} = functor {{", sym.text));
                            for (k, v) in ob {
                                out.push_str(&format!(" obj {k} -> {};", v.text));
                            }
                            for (k, v) in arr {
                                out.push_str(&format!(" arr {k} -> "));
                                write_arrowref(&mut out, v);
                                out.push(';');
                            }
                            out.push_str(" };\n");
                        }
                        InterpDecl::Nat { sym, comps } => {
                            out.push_str(&format!("  {} = nat {{", sym.text));
                            for (k, v) in comps {
                                out.push_str(&format!(" {k} -> "));
                                write_arrowref(&mut out, v);
                                out.push(';');
                            }
                            out.push_str(" };\n");
                        }
                        InterpDecl::Table { sym, rows } => {
                            out.push_str(&format!("  {} = table {{", sym.text));
                            for (key, v) in rows {
                                out.push_str(" (");
                                for (i, k) in key.iter().enumerate() {
                                    if i > 0 {
                                        out.push_str(", ");
                                    }
                                    out.push_str(&k.text);
                                }
                                out.push_str(&format!(") -> {};", v.text));
                            }
                            out.push_str(" };\n");
                        }
                    }
                }
                out.push_str("}\n\n");
            }
            Decl::Probes(p) => {
                out.push_str(&format!(
                    "probes {} over {} {{ ",
                    p.name.text, p.language.text
                ));
                for (i, s) in p.structures.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    out.push_str(&s.text);
                }
                out.push_str("; }\n\n");
            }
            Decl::Functor(f) => {
                out.push_str(&format!(
                    "functor {} : {} -> {} {{\n",
                    f.name.text, f.dom.text, f.cod.text
                ));
                for (a, b) in &f.ob {
                    out.push_str(&format!("  obj {} -> {};\n", a.text, b.text));
                }
                for (a, b) in &f.arr {
                    out.push_str("  arr ");
                    write_arrowref(&mut out, a);
                    out.push_str(" -> ");
                    write_arrowref(&mut out, b);
                    out.push_str(";\n");
                }
                out.push_str("}\n\n");
            }
        }
    }
    out
}
