//! Name resolution and elaboration from the syntax tree into semantic
//! objects: categories, posets, metric spaces, languages, theories,
//! structures, probe sets, and functors.
//!
//! Declarations reference only earlier declarations, so elaboration is a
//! single pass; each failing declaration contributes a diagnostic and is
//! skipped.

use std::sync::Arc;

use crate::budget::Budget;
use crate::concrete::{
    Ext, FinMet, FinPos, MetBase, OrdJudgement, OrdLanguage, OrdStructure, OrdSym, OrdTerm,
    OrdTheory, PosBase,
};
use crate::concrete::Base as OrdBase;
use crate::fincat::{
    CatPresentation, FinCat, FinFunctor, GeneratingFamily, Generator, HomCat,
};
use crate::interp::{CatStructure, SymTable};
use crate::terms::{FnSym, Judgement, Language, Term, Theory};

use super::ast::*;

/// The elaborated contents of a source file.
#[derive(Default)]
pub struct Workspace {
    pub categories: Vec<(String, Arc<FinCat>)>,
    pub posets: Vec<(String, FinPos)>,
    pub metrics: Vec<(String, FinMet)>,
    pub languages: Vec<(String, AnyLanguage)>,
    pub theories: Vec<(String, AnyTheory)>,
    pub structures: Vec<(String, AnyStructure)>,
    pub probes: Vec<(String, Vec<String>)>,
    pub functors: Vec<(String, FinFunctor)>,
}

#[derive(Clone)]
pub enum AnyLanguage {
    Cat(Arc<Language>),
    Pos(Arc<OrdLanguage<PosBase>>),
    Met(Arc<OrdLanguage<MetBase>>),
}

#[derive(Clone)]
pub enum AnyTheory {
    Cat(Arc<Theory>),
    Pos(Arc<OrdTheory<PosBase>>),
    Met(Arc<OrdTheory<MetBase>>),
}

#[derive(Clone)]
pub enum AnyStructure {
    Cat(Arc<CatStructure>),
    Pos(Arc<OrdStructure<PosBase>>),
    Met(Arc<OrdStructure<MetBase>>),
}

impl Workspace {
    pub fn category(&self, name: &str) -> Option<&Arc<FinCat>> {
        self.categories.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn poset(&self, name: &str) -> Option<&FinPos> {
        self.posets.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn metric(&self, name: &str) -> Option<&FinMet> {
        self.metrics.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn language(&self, name: &str) -> Option<&AnyLanguage> {
        self.languages.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn theory(&self, name: &str) -> Option<&AnyTheory> {
        self.theories.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn structure(&self, name: &str) -> Option<&AnyStructure> {
        self.structures.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn functor(&self, name: &str) -> Option<&FinFunctor> {
        self.functors.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }
}

fn rat_to_ext(r: &Rational, span: Span) -> Result<Ext, Diagnostic> {
    match *r {
        Rational::Inf => Ok(Ext::Inf),
        Rational::Fin(n, d) => {
            if d == 0 {
                return Err(Diagnostic::error(span, "zero denominator"));
            }
            if n < 0 || d < 0 {
                return Err(Diagnostic::error(span, "distances must be non-negative"));
            }
            Ok(Ext::from_ratio(n, d))
        }
    }
}

/// Elaborates a parsed file. Returns the workspace and all diagnostics;
/// a nonempty diagnostic list means at least one declaration was dropped.
pub fn elaborate(file: &SourceFile, budget: &Budget) -> (Workspace, Vec<Diagnostic>) {
    let mut ws = Workspace::default();
    let diags = elaborate_in(&mut ws, file, budget);
    (ws, diags)
}

/// Elaborates additional declarations into an existing workspace (used by
/// the CLI to evaluate ad-hoc terms in a file's scope).
pub fn elaborate_in(ws: &mut Workspace, file: &SourceFile, budget: &Budget) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut seen: std::collections::HashSet<(String, &'static str)> =
        std::collections::HashSet::new();
    for d in &file.decls {
        let key = (d.name().text.clone(), d.kind());
        if !seen.insert(key) {
            diags.push(Diagnostic::error(
                d.name().span,
                format!("duplicate {} named {}", d.kind(), d.name().text),
            ));
            continue;
        }
        let r = match d {
            Decl::Category(c) => elab_category(ws, c, budget),
            Decl::Poset(p) => elab_poset(ws, p),
            Decl::Metric(m) => elab_metric(ws, m),
            Decl::Language(l) => elab_language(ws, l),
            Decl::Theory(t) => elab_theory(ws, t),
            Decl::Structure(s) => elab_structure(ws, s, budget),
            Decl::Probes(p) => elab_probes(ws, p),
            Decl::Functor(f) => elab_functor(ws, f),
        };
        if let Err(d) = r {
            diags.push(d);
        }
    }
    diags
}

fn elab_category(ws: &mut Workspace, c: &CategoryDecl, budget: &Budget) -> Result<(), Diagnostic> {
    let obj_index = |n: &Name| -> Result<usize, Diagnostic> {
        c.objects
            .iter()
            .position(|o| o.text == n.text)
            .ok_or_else(|| Diagnostic::error(n.span, format!("unknown object {}", n.text)))
    };
    let mut generators = Vec::new();
    for (a, s, t) in &c.arrows {
        generators.push((a.text.clone(), obj_index(s)?, obj_index(t)?));
    }
    let gen_index = |n: &Name| -> Result<usize, Diagnostic> {
        c.arrows
            .iter()
            .position(|(a, _, _)| a.text == n.text)
            .ok_or_else(|| Diagnostic::error(n.span, format!("unknown arrow {}", n.text)))
    };
    let mut relations = Vec::new();
    for (lhs, rhs) in &c.relations {
        // Written composition order `g.f`: reverse into application order,
        // dropping identity segments.
        let side = |segs: &[ArrowRef]| -> Result<Vec<usize>, Diagnostic> {
            let mut path = Vec::new();
            for seg in segs.iter().rev() {
                match seg {
                    ArrowRef::Label(n) => path.push(gen_index(n)?),
                    ArrowRef::IdentityAt(o) => {
                        obj_index(o)?;
                    }
                }
            }
            Ok(path)
        };
        relations.push((side(lhs)?, side(rhs)?));
    }
    let pres = CatPresentation {
        object_labels: c.objects.iter().map(|o| o.text.clone()).collect(),
        generators,
        relations,
    };
    let cat = pres
        .close(budget.max_presentation_arrows)
        .map_err(|e| Diagnostic::error(c.name.span, format!("category {}: {e}", c.name.text)))?;
    ws.categories.push((c.name.text.clone(), cat));
    Ok(())
}

fn elab_poset(ws: &mut Workspace, p: &PosetDecl) -> Result<(), Diagnostic> {
    let idx = |n: &Name| -> Result<usize, Diagnostic> {
        p.points
            .iter()
            .position(|o| o.text == n.text)
            .ok_or_else(|| Diagnostic::error(n.span, format!("unknown point {}", n.text)))
    };
    let mut pairs = Vec::new();
    for (a, b) in &p.order {
        pairs.push((idx(a)?, idx(b)?));
    }
    let pos = FinPos::new(p.points.iter().map(|o| o.text.clone()).collect(), &pairs)
        .map_err(|e| Diagnostic::error(p.name.span, format!("poset {}: {e}", p.name.text)))?;
    ws.posets.push((p.name.text.clone(), pos));
    Ok(())
}

fn elab_metric(ws: &mut Workspace, m: &MetricDecl) -> Result<(), Diagnostic> {
    let idx = |n: &Name| -> Result<usize, Diagnostic> {
        m.points
            .iter()
            .position(|o| o.text == n.text)
            .ok_or_else(|| Diagnostic::error(n.span, format!("unknown point {}", n.text)))
    };
    let mut entries = Vec::new();
    for (a, b, r) in &m.dists {
        entries.push((idx(a)?, idx(b)?, rat_to_ext(r, a.span)?));
    }
    let met = FinMet::new(m.points.iter().map(|o| o.text.clone()).collect(), &entries)
        .map_err(|e| Diagnostic::error(m.name.span, format!("metric {}: {e}", m.name.text)))?;
    ws.metrics.push((m.name.text.clone(), met));
    Ok(())
}

fn elab_language(ws: &mut Workspace, l: &LanguageDecl) -> Result<(), Diagnostic> {
    match l.base {
        BaseKind::Cat => {
            let mut syms1 = Vec::new();
            let mut pending2 = Vec::new();
            for op in &l.ops {
                match op {
                    OpDecl::Op { name, arity } => {
                        let cat = ws.category(&arity.text).ok_or_else(|| {
                            Diagnostic::error(arity.span, format!("unknown category {}", arity.text))
                        })?;
                        syms1.push(FnSym { name: name.text.clone(), arity: cat.clone() });
                    }
                    OpDecl::Op2 { name, dom, cod, arity } => {
                        pending2.push((name, dom, cod, arity));
                    }
                }
            }
            let mut syms2 = Vec::new();
            for (name, dom, cod, arity) in pending2 {
                let di = syms1
                    .iter()
                    .position(|s| s.name == dom.text)
                    .ok_or_else(|| {
                        Diagnostic::error(dom.span, format!("unknown 1-symbol {}", dom.text))
                    })?;
                let ci = syms1
                    .iter()
                    .position(|s| s.name == cod.text)
                    .ok_or_else(|| {
                        Diagnostic::error(cod.span, format!("unknown 1-symbol {}", cod.text))
                    })?;
                let cat = ws.category(&arity.text).ok_or_else(|| {
                    Diagnostic::error(arity.span, format!("unknown category {}", arity.text))
                })?;
                if &syms1[di].arity != cat {
                    return Err(Diagnostic::error(
                        arity.span,
                        format!("2-symbol {} arity differs from its endpoints", name.text),
                    ));
                }
                syms2.push((name.text.clone(), di, ci));
            }
            let lang = Language::new(l.name.text.clone(), syms1, syms2)
                .map_err(|e| Diagnostic::error(l.name.span, e.to_string()))?;
            ws.languages
                .push((l.name.text.clone(), AnyLanguage::Cat(Arc::new(lang))));
        }
        BaseKind::Pos => {
            let mut syms = Vec::new();
            for op in &l.ops {
                match op {
                    OpDecl::Op { name, arity } => {
                        let obj = ws.poset(&arity.text).ok_or_else(|| {
                            Diagnostic::error(arity.span, format!("unknown poset {}", arity.text))
                        })?;
                        syms.push(OrdSym { name: name.text.clone(), arity: obj.clone() });
                    }
                    OpDecl::Op2 { name, .. } => {
                        return Err(Diagnostic::error(
                            name.span,
                            "op2 is only available over categories",
                        ))
                    }
                }
            }
            let lang = OrdLanguage::new(l.name.text.clone(), syms);
            ws.languages
                .push((l.name.text.clone(), AnyLanguage::Pos(Arc::new(lang))));
        }
        BaseKind::Met => {
            let mut syms = Vec::new();
            for op in &l.ops {
                match op {
                    OpDecl::Op { name, arity } => {
                        let obj = ws.metric(&arity.text).ok_or_else(|| {
                            Diagnostic::error(arity.span, format!("unknown metric {}", arity.text))
                        })?;
                        syms.push(OrdSym { name: name.text.clone(), arity: obj.clone() });
                    }
                    OpDecl::Op2 { name, .. } => {
                        return Err(Diagnostic::error(
                            name.span,
                            "op2 is only available over categories",
                        ))
                    }
                }
            }
            let lang = OrdLanguage::new(l.name.text.clone(), syms);
            ws.languages
                .push((l.name.text.clone(), AnyLanguage::Met(Arc::new(lang))));
        }
    }
    Ok(())
}

fn resolve_arrow(cat: &FinCat, a: &ArrowRef, catname: &str) -> Result<usize, Diagnostic> {
    match a {
        ArrowRef::Label(n) => cat.arrow_by_label(&n.text).ok_or_else(|| {
            Diagnostic::error(n.span, format!("no arrow {} in {catname}", n.text))
        }),
        ArrowRef::IdentityAt(o) => {
            let oi = cat.object_by_label(&o.text).ok_or_else(|| {
                Diagnostic::error(o.span, format!("no object {} in {catname}", o.text))
            })?;
            Ok(cat.identity(oi) as usize)
        }
    }
}

/// Elaborates a Cat-flavor term expression against a language.
pub fn elab_cat_term(
    ws: &Workspace,
    lang: &Arc<Language>,
    e: &TermExpr,
) -> Result<Term, Diagnostic> {
    match e {
        TermExpr::Obj { cat, object } => {
            let c = ws
                .category(&cat.text)
                .ok_or_else(|| Diagnostic::error(cat.span, format!("unknown category {}", cat.text)))?;
            let oi = c.object_by_label(&object.text).ok_or_else(|| {
                Diagnostic::error(object.span, format!("no object {} in {}", object.text, cat.text))
            })?;
            Term::var_obj(c, oi).map_err(|err| Diagnostic::error(object.span, err.to_string()))
        }
        TermExpr::Arr { cat, arrow } => {
            let c = ws
                .category(&cat.text)
                .ok_or_else(|| Diagnostic::error(cat.span, format!("unknown category {}", cat.text)))?;
            let ai = resolve_arrow(c, arrow, &cat.text)?;
            Term::var_arr(c, ai).map_err(|err| Diagnostic::error(arrow.span(), err.to_string()))
        }
        TermExpr::Symbol(n) => Term::sym(lang, &n.text)
            .or_else(|_| Term::sym2(lang, &n.text))
            .map_err(|_| Diagnostic::error(n.span, format!("unknown symbol {}", n.text))),
        TermExpr::Power2 { inner, span } => {
            let t = elab_cat_term(ws, lang, inner)?;
            Term::power2(t).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::Comp { lhs, rhs, span } => {
            let l = elab_cat_term(ws, lang, lhs)?;
            let r = elab_cat_term(ws, lang, rhs)?;
            Term::compose2(l, r).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::Inv { inner, span } => {
            let t = elab_cat_term(ws, lang, inner)?;
            Term::invert2(t).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::IdOf { inner, span } => {
            let t = elab_cat_term(ws, lang, inner)?;
            Term::identity2(t).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::Endpoint { inner, end, span } => {
            let t = elab_cat_term(ws, lang, inner)?;
            Term::endpoint(t, *end).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::Precompose { inner, functor, span } => {
            let t = elab_cat_term(ws, lang, inner)?;
            let h = ws.functor(&functor.text).ok_or_else(|| {
                Diagnostic::error(functor.span, format!("unknown functor {}", functor.text))
            })?;
            Term::precompose(t, h).map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        TermExpr::Glue { outer, cover_cat, gens, family, span } => {
            let o = elab_cat_term(ws, lang, outer)?;
            let y = ws.category(&cover_cat.text).ok_or_else(|| {
                Diagnostic::error(cover_cat.span, format!("unknown category {}", cover_cat.text))
            })?;
            let mut cover_gens = Vec::new();
            for g in gens {
                cover_gens.push(elab_gen(y, g, &cover_cat.text)?);
            }
            let cover = GeneratingFamily::validate(y.clone(), cover_gens.clone())
                .map_err(|e| Diagnostic::error(*span, e.to_string()))?;
            // Family members keyed by generator; align with the cover.
            let mut members: Vec<Option<Term>> = vec![None; cover_gens.len()];
            for (g, m) in family {
                let gg = elab_gen(y, g, &cover_cat.text)?;
                let pos = cover_gens.iter().position(|x| *x == gg).ok_or_else(|| {
                    Diagnostic::error(*span, "family entry for a generator not in the cover")
                })?;
                if members[pos].is_some() {
                    return Err(Diagnostic::error(*span, "duplicate family entry"));
                }
                members[pos] = Some(elab_cat_term(ws, lang, m)?);
            }
            let family: Vec<Term> = members
                .into_iter()
                .enumerate()
                .map(|(i, m)| {
                    m.ok_or_else(|| {
                        Diagnostic::error(*span, format!("missing family entry for generator {i}"))
                    })
                })
                .collect::<Result<_, _>>()?;
            if family.is_empty() {
                // Arity cannot be inferred; the only gluings with an empty
                // cover live over the empty category.
                let empty = FinCat::empty();
                Term::glue_with_arity(o, cover, family, empty)
                    .map_err(|err| Diagnostic::error(*span, err.to_string()))
            } else {
                Term::glue(o, cover, family)
                    .map_err(|err| Diagnostic::error(*span, err.to_string()))
            }
        }
        TermExpr::Var { arity, .. } => Err(Diagnostic::error(
            arity.span,
            "var(...) is the concrete-term syntax; use obj/arr over categories",
        )),
        TermExpr::Apply { span, .. } => Err(Diagnostic::error(
            *span,
            "application syntax is for concrete languages; use glue over categories",
        )),
    }
}

fn elab_gen(y: &Arc<FinCat>, g: &GenRef, catname: &str) -> Result<Generator, Diagnostic> {
    match g {
        GenRef::Arrow(a) => Ok(Generator::Arrow(resolve_arrow(y, a, catname)?)),
        GenRef::Object(o) => {
            let oi = y.object_by_label(&o.text).ok_or_else(|| {
                Diagnostic::error(o.span, format!("no object {} in {catname}", o.text))
            })?;
            Ok(Generator::Object(oi))
        }
    }
}

/// Elaborates a concrete-flavor term against an ordered/metric language.
fn elab_ord_term<B>(
    arities: &dyn Fn(&str) -> Option<B::Obj>,
    lang: &Arc<OrdLanguage<B>>,
    e: &TermExpr,
) -> Result<OrdTerm<B>, Diagnostic>
where
    B: OrdBase,
{
    match e {
        TermExpr::Var { arity, point } => {
            let obj = arities(&arity.text).ok_or_else(|| {
                Diagnostic::error(arity.span, format!("unknown arity object {}", arity.text))
            })?;
            let pi = (0..B::size(&obj))
                .find(|&p| B::label(&obj, p) == point.text)
                .ok_or_else(|| {
                    Diagnostic::error(
                        point.span,
                        format!("no point {} in {}", point.text, arity.text),
                    )
                })?;
            OrdTerm::var(&obj, pi).map_err(|err| Diagnostic::error(point.span, err.to_string()))
        }
        TermExpr::Symbol(n) => OrdTerm::sym(lang, &n.text)
            .map_err(|_| Diagnostic::error(n.span, format!("unknown symbol {}", n.text))),
        TermExpr::Apply { sym, args, span } => {
            let elab_args: Result<Vec<_>, _> =
                args.iter().map(|a| elab_ord_term(arities, lang, a)).collect();
            OrdTerm::app(lang, &sym.text, elab_args?)
                .map_err(|err| Diagnostic::error(*span, err.to_string()))
        }
        other => Err(Diagnostic::error(
            other.span(),
            "this construct is not part of the concrete term syntax",
        )),
    }
}

fn elab_theory(ws: &mut Workspace, t: &TheoryDecl) -> Result<(), Diagnostic> {
    let lang = ws
        .language(&t.language.text)
        .ok_or_else(|| {
            Diagnostic::error(t.language.span, format!("unknown language {}", t.language.text))
        })?
        .clone();
    match lang {
        AnyLanguage::Cat(lang) => {
            let mut judgements = Vec::new();
            for j in &t.judgements {
                match j {
                    JudgementDecl::Defined { term, .. } => {
                        judgements.push(Judgement::Defined(elab_cat_term(ws, &lang, term)?));
                    }
                    JudgementDecl::Equal { lhs, rhs, span } => {
                        let l = elab_cat_term(ws, &lang, lhs)?;
                        let r = elab_cat_term(ws, &lang, rhs)?;
                        judgements.push(
                            Judgement::equal(l, r)
                                .map_err(|e| Diagnostic::error(*span, e.to_string()))?,
                        );
                    }
                    JudgementDecl::Inequality { span, .. } => {
                        return Err(Diagnostic::error(
                            *span,
                            "ineq is only available over poset languages",
                        ))
                    }
                    JudgementDecl::Within { span, .. } => {
                        return Err(Diagnostic::error(
                            *span,
                            "within is only available over metric languages",
                        ))
                    }
                }
            }
            let theory = Theory::new(t.name.text.clone(), lang, judgements)
                .map_err(|e| Diagnostic::error(t.name.span, e.to_string()))?;
            ws.theories
                .push((t.name.text.clone(), AnyTheory::Cat(Arc::new(theory))));
        }
        AnyLanguage::Pos(lang) => {
            let posets: Vec<(String, FinPos)> = ws.posets.clone();
            let arities = move |n: &str| posets.iter().find(|(m, _)| m == n).map(|(_, p)| p.clone());
            let mut judgements = Vec::new();
            for j in &t.judgements {
                match j {
                    JudgementDecl::Defined { term, .. } => {
                        judgements
                            .push(OrdJudgement::Defined(elab_ord_term(&arities, &lang, term)?));
                    }
                    JudgementDecl::Equal { lhs, rhs, .. } => {
                        judgements.push(OrdJudgement::Equal(
                            elab_ord_term(&arities, &lang, lhs)?,
                            elab_ord_term(&arities, &lang, rhs)?,
                        ));
                    }
                    JudgementDecl::Inequality { lhs, rhs, span } => {
                        let l = elab_ord_term(&arities, &lang, lhs)?;
                        let r = elab_ord_term(&arities, &lang, rhs)?;
                        judgements.push(
                            OrdTheory::inequality(l, r)
                                .map_err(|e| Diagnostic::error(*span, e.to_string()))?,
                        );
                    }
                    JudgementDecl::Within { span, .. } => {
                        return Err(Diagnostic::error(
                            *span,
                            "within is only available over metric languages",
                        ))
                    }
                }
            }
            let theory = OrdTheory { name: t.name.text.clone(), language: lang, judgements };
            ws.theories
                .push((t.name.text.clone(), AnyTheory::Pos(Arc::new(theory))));
        }
        AnyLanguage::Met(lang) => {
            let metrics: Vec<(String, FinMet)> = ws.metrics.clone();
            let arities =
                move |n: &str| metrics.iter().find(|(m, _)| m == n).map(|(_, p)| p.clone());
            let mut judgements = Vec::new();
            for j in &t.judgements {
                match j {
                    JudgementDecl::Defined { term, .. } => {
                        judgements
                            .push(OrdJudgement::Defined(elab_ord_term(&arities, &lang, term)?));
                    }
                    JudgementDecl::Equal { lhs, rhs, .. } => {
                        judgements.push(OrdJudgement::Equal(
                            elab_ord_term(&arities, &lang, lhs)?,
                            elab_ord_term(&arities, &lang, rhs)?,
                        ));
                    }
                    JudgementDecl::Within { lhs, rhs, eps, span } => {
                        let l = elab_ord_term(&arities, &lang, lhs)?;
                        let r = elab_ord_term(&arities, &lang, rhs)?;
                        judgements.push(
                            OrdTheory::within(l, r, rat_to_ext(eps, *span)?)
                                .map_err(|e| Diagnostic::error(*span, e.to_string()))?,
                        );
                    }
                    JudgementDecl::Inequality { span, .. } => {
                        return Err(Diagnostic::error(
                            *span,
                            "ineq is only available over poset languages",
                        ))
                    }
                }
            }
            let theory = OrdTheory { name: t.name.text.clone(), language: lang, judgements };
            ws.theories
                .push((t.name.text.clone(), AnyTheory::Met(Arc::new(theory))));
        }
    }
    Ok(())
}

fn elab_structure(ws: &mut Workspace, s: &StructureDecl, budget: &Budget) -> Result<(), Diagnostic> {
    let lang = ws
        .language(&s.language.text)
        .ok_or_else(|| {
            Diagnostic::error(s.language.span, format!("unknown language {}", s.language.text))
        })?
        .clone();
    match lang {
        AnyLanguage::Cat(lang) => {
            let carrier = ws.category(&s.carrier.text).ok_or_else(|| {
                Diagnostic::error(s.carrier.span, format!("unknown category {}", s.carrier.text))
            })?;
            let mut interp1 = Vec::new();
            for sym in lang.syms1() {
                let decl = s
                    .interps
                    .iter()
                    .find(|i| i.sym().text == sym.name)
                    .ok_or_else(|| {
                        Diagnostic::error(
                            s.name.span,
                            format!("missing interpretation for symbol {}", sym.name),
                        )
                    })?;
                let InterpDecl::Functor { ob, arr, sym: symname } = decl else {
                    return Err(Diagnostic::error(
                        decl.sym().span,
                        format!("symbol {} needs a functor table", sym.name),
                    ));
                };
                let hom = HomCat::build(sym.arity.clone(), carrier.clone(), budget)
                    .map_err(|e| Diagnostic::error(symname.span, e.to_string()))?;
                let mut obt = vec![u32::MAX; hom.n_functors()];
                for (k, v) in ob {
                    let oi = carrier.object_by_label(&v.text).ok_or_else(|| {
                        Diagnostic::error(v.span, format!("no object {} in carrier", v.text))
                    })?;
                    if (*k as usize) >= obt.len() {
                        return Err(Diagnostic::error(v.span, "functor index out of range"));
                    }
                    obt[*k as usize] = oi as u32;
                }
                let mut arrt = vec![u32::MAX; hom.n_transfs()];
                for (k, v) in arr {
                    let ai = resolve_arrow(carrier, v, &s.carrier.text)?;
                    if (*k as usize) >= arrt.len() {
                        return Err(Diagnostic::error(v.span(), "transformation index out of range"));
                    }
                    arrt[*k as usize] = ai as u32;
                }
                if obt.iter().any(|&x| x == u32::MAX) || arrt.iter().any(|&x| x == u32::MAX) {
                    return Err(Diagnostic::error(
                        symname.span,
                        format!(
                            "symbol {} table incomplete: need {} object and {} arrow entries",
                            sym.name,
                            hom.n_functors(),
                            hom.n_transfs()
                        ),
                    ));
                }
                interp1.push(SymTable { ob: obt, arr: arrt });
            }
            let mut interp2 = Vec::new();
            for sym in lang.syms2() {
                let decl = s
                    .interps
                    .iter()
                    .find(|i| i.sym().text == sym.name)
                    .ok_or_else(|| {
                        Diagnostic::error(
                            s.name.span,
                            format!("missing interpretation for 2-symbol {}", sym.name),
                        )
                    })?;
                let InterpDecl::Nat { comps, sym: symname } = decl else {
                    return Err(Diagnostic::error(
                        decl.sym().span,
                        format!("2-symbol {} needs a nat table", sym.name),
                    ));
                };
                let hom = HomCat::build(sym.arity.clone(), carrier.clone(), budget)
                    .map_err(|e| Diagnostic::error(symname.span, e.to_string()))?;
                let mut table = vec![u32::MAX; hom.n_functors()];
                for (k, v) in comps {
                    let ai = resolve_arrow(carrier, v, &s.carrier.text)?;
                    if (*k as usize) >= table.len() {
                        return Err(Diagnostic::error(v.span(), "functor index out of range"));
                    }
                    table[*k as usize] = ai as u32;
                }
                if table.iter().any(|&x| x == u32::MAX) {
                    return Err(Diagnostic::error(
                        symname.span,
                        format!(
                            "2-symbol {} table incomplete: need {} components",
                            sym.name,
                            hom.n_functors()
                        ),
                    ));
                }
                interp2.push(table);
            }
            let st = CatStructure::new(
                s.name.text.clone(),
                lang,
                carrier.clone(),
                interp1,
                interp2,
                budget,
            )
            .map_err(|e| Diagnostic::error(s.name.span, e.to_string()))?;
            ws.structures
                .push((s.name.text.clone(), AnyStructure::Cat(Arc::new(st))));
        }
        AnyLanguage::Pos(lang) => {
            let carrier = ws
                .poset(&s.carrier.text)
                .ok_or_else(|| {
                    Diagnostic::error(s.carrier.span, format!("unknown poset {}", s.carrier.text))
                })?
                .clone();
            let st = elab_ord_structure::<PosBase>(s, &lang, carrier)?;
            ws.structures
                .push((s.name.text.clone(), AnyStructure::Pos(Arc::new(st))));
        }
        AnyLanguage::Met(lang) => {
            let carrier = ws
                .metric(&s.carrier.text)
                .ok_or_else(|| {
                    Diagnostic::error(s.carrier.span, format!("unknown metric {}", s.carrier.text))
                })?
                .clone();
            let st = elab_ord_structure::<MetBase>(s, &lang, carrier)?;
            ws.structures
                .push((s.name.text.clone(), AnyStructure::Met(Arc::new(st))));
        }
    }
    Ok(())
}

fn elab_ord_structure<B>(
    s: &StructureDecl,
    lang: &Arc<OrdLanguage<B>>,
    carrier: B::Obj,
) -> Result<OrdStructure<B>, Diagnostic>
where
    B: OrdBase,
{
    let mut tables = Vec::new();
    for sym in lang.syms() {
        let decl = s
            .interps
            .iter()
            .find(|i| i.sym().text == sym.name)
            .ok_or_else(|| {
                Diagnostic::error(
                    s.name.span,
                    format!("missing interpretation for symbol {}", sym.name),
                )
            })?;
        let InterpDecl::Table { rows, sym: symname } = decl else {
            return Err(Diagnostic::error(
                decl.sym().span,
                format!("symbol {} needs a value table", sym.name),
            ));
        };
        let vals = B::hom(&sym.arity, &carrier);
        let mut table = vec![usize::MAX; vals.len()];
        for (key, v) in rows {
            if key.len() != B::size(&sym.arity) {
                return Err(Diagnostic::error(
                    symname.span,
                    format!("row needs {} entries", B::size(&sym.arity)),
                ));
            }
            let mut tuple = Vec::with_capacity(key.len());
            for k in key {
                let pi = (0..B::size(&carrier))
                    .find(|&p| B::label(&carrier, p) == k.text)
                    .ok_or_else(|| {
                        Diagnostic::error(k.span, format!("no point {} in carrier", k.text))
                    })?;
                tuple.push(pi);
            }
            let vi = vals.iter().position(|w| w == &tuple).ok_or_else(|| {
                Diagnostic::error(
                    symname.span,
                    "row key is not a structure-respecting valuation",
                )
            })?;
            let value = (0..B::size(&carrier))
                .find(|&p| B::label(&carrier, p) == v.text)
                .ok_or_else(|| {
                    Diagnostic::error(v.span, format!("no point {} in carrier", v.text))
                })?;
            table[vi] = value;
        }
        if let Some(missing) = table.iter().position(|&x| x == usize::MAX) {
            return Err(Diagnostic::error(
                symname.span,
                format!(
                    "symbol {} table incomplete: valuation {missing} has no value ({} needed)",
                    sym.name,
                    vals.len()
                ),
            ));
        }
        tables.push(table);
    }
    OrdStructure::new(s.name.text.clone(), lang.clone(), carrier, tables)
        .map_err(|e| Diagnostic::error(s.name.span, e.to_string()))
}

fn elab_probes(ws: &mut Workspace, p: &ProbesDecl) -> Result<(), Diagnostic> {
    ws.language(&p.language.text).ok_or_else(|| {
        Diagnostic::error(p.language.span, format!("unknown language {}", p.language.text))
    })?;
    let mut names = Vec::new();
    for s in &p.structures {
        if ws.structure(&s.text).is_none() {
            return Err(Diagnostic::error(
                s.span,
                format!("unknown structure {}", s.text),
            ));
        }
        names.push(s.text.clone());
    }
    ws.probes.push((p.name.text.clone(), names));
    Ok(())
}

fn elab_functor(ws: &mut Workspace, f: &FunctorDecl) -> Result<(), Diagnostic> {
    let dom = ws
        .category(&f.dom.text)
        .ok_or_else(|| Diagnostic::error(f.dom.span, format!("unknown category {}", f.dom.text)))?
        .clone();
    let cod = ws
        .category(&f.cod.text)
        .ok_or_else(|| Diagnostic::error(f.cod.span, format!("unknown category {}", f.cod.text)))?
        .clone();
    let mut ob_map = vec![u32::MAX; dom.n_objects()];
    for (a, b) in &f.ob {
        let ai = dom.object_by_label(&a.text).ok_or_else(|| {
            Diagnostic::error(a.span, format!("no object {} in {}", a.text, f.dom.text))
        })?;
        let bi = cod.object_by_label(&b.text).ok_or_else(|| {
            Diagnostic::error(b.span, format!("no object {} in {}", b.text, f.cod.text))
        })?;
        ob_map[ai] = bi as u32;
    }
    if let Some(missing) = ob_map.iter().position(|&x| x == u32::MAX) {
        return Err(Diagnostic::error(
            f.name.span,
            format!("object {} has no image", dom.object_label(missing)),
        ));
    }
    let mut arr_map = vec![u32::MAX; dom.n_arrows()];
    // Identities are implied.
    for o in 0..dom.n_objects() {
        arr_map[dom.identity(o) as usize] = cod.identity(ob_map[o] as usize);
    }
    for (a, b) in &f.arr {
        let ai = resolve_arrow(&dom, a, &f.dom.text)?;
        let bi = resolve_arrow(&cod, b, &f.cod.text)?;
        arr_map[ai] = bi as u32;
    }
    if let Some(missing) = arr_map.iter().position(|&x| x == u32::MAX) {
        return Err(Diagnostic::error(
            f.name.span,
            format!("arrow {} has no image", dom.arrow_label(missing)),
        ));
    }
    let functor = FinFunctor::new(dom, cod, ob_map, arr_map)
        .map_err(|e| Diagnostic::error(f.name.span, format!("not a functor: {e}")))?;
    ws.functors.push((f.name.text.clone(), functor));
    Ok(())
}
