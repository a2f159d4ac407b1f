//! Recursive-descent parser from tokens to the syntax tree. Every failure
//! is a diagnostic with the offending position.

use super::ast::*;
use super::lex::{lex, Tok, Token};

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, Diagnostic>;

/// Parses a source file, collecting every top-level declaration.
pub fn parse(src: &str) -> Result<SourceFile, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    while !p.at_end() {
        match p.decl() {
            Ok(d) => decls.push(d),
            Err(d) => {
                diags.push(d);
                // Recover at the next plausible declaration head.
                p.skip_to_decl_head();
            }
        }
    }
    if diags.is_empty() {
        Ok(SourceFile { decls })
    } else {
        Err(diags)
    }
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> Span {
        self.peek()
            .map(|t| t.span)
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|t| t.span)
                    .unwrap_or(Span::new(1, 1))
            })
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        match self.peek() {
            Some(t) if &t.tok == tok => {
                let s = t.span;
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(Diagnostic::error(
                t.span,
                format!("expected {tok:?}, found `{}`", t.tok),
            )),
            None => Err(Diagnostic::error(self.here(), format!("expected {tok:?} at end of input"))),
        }
    }

    fn ident(&mut self) -> PResult<Name> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), span }) => {
                let n = Name { text: s.clone(), span: *span };
                self.pos += 1;
                Ok(n)
            }
            Some(Token { tok: Tok::Int(v), span }) => {
                // Numeric names are convenient for point/object labels.
                let n = Name { text: v.to_string(), span: *span };
                self.pos += 1;
                Ok(n)
            }
            Some(t) => Err(Diagnostic::error(
                t.span,
                format!("expected an identifier, found `{}`", t.tok),
            )),
            None => Err(Diagnostic::error(self.here(), "expected an identifier at end of input")),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        match self.peek() {
            Some(Token { tok: Tok::Ident(s), span }) if s == kw => {
                let s = *span;
                self.pos += 1;
                Ok(s)
            }
            Some(t) => Err(Diagnostic::error(
                t.span,
                format!("expected `{kw}`, found `{}`", t.tok),
            )),
            None => Err(Diagnostic::error(self.here(), format!("expected `{kw}` at end of input"))),
        }
    }

    fn peek_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == kw)
    }

    fn peek_tok(&self, tok: &Tok) -> bool {
        matches!(self.peek(), Some(t) if &t.tok == tok)
    }

    fn peek2_tok(&self, tok: &Tok) -> bool {
        matches!(self.toks.get(self.pos + 1), Some(t) if &t.tok == tok)
    }

    fn skip_to_decl_head(&mut self) {
        const HEADS: [&str; 8] = [
            "category", "poset", "metric", "language", "theory", "structure", "probes", "functor",
        ];
        while let Some(t) = self.peek() {
            if let Tok::Ident(s) = &t.tok {
                if HEADS.contains(&s.as_str()) {
                    return;
                }
            }
            self.pos += 1;
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let head = self.ident()?;
        match head.text.as_str() {
            "category" => self.category(),
            "poset" => self.poset(),
            "metric" => self.metric(),
            "language" => self.language(),
            "theory" => self.theory(),
            "structure" => self.structure(),
            "probes" => self.probes(),
            "functor" => self.functor(),
            other => Err(Diagnostic::error(
                head.span,
                format!("unknown declaration kind `{other}`"),
            )),
        }
    }

    fn category(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        self.keyword("objects")?;
        let mut objects = Vec::new();
        while !self.peek_tok(&Tok::Semi) {
            objects.push(self.ident()?);
        }
        self.expect(&Tok::Semi)?;
        let mut arrows = Vec::new();
        if self.peek_keyword("arrows") {
            self.bump();
            loop {
                let a = self.ident()?;
                self.expect(&Tok::Colon)?;
                let s = self.ident()?;
                self.expect(&Tok::Arrow)?;
                let t = self.ident()?;
                arrows.push((a, s, t));
                if self.peek_tok(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(&Tok::Semi)?;
        }
        let mut relations = Vec::new();
        if self.peek_keyword("relations") {
            self.bump();
            loop {
                let lhs = self.path()?;
                self.expect(&Tok::Eq)?;
                let rhs = self.path()?;
                relations.push((lhs, rhs));
                if self.peek_tok(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(&Tok::Semi)?;
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Category(CategoryDecl { name, objects, arrows, relations }))
    }

    /// `g.f` or `id(a)`; segments are written left-composed.
    fn path(&mut self) -> PResult<Vec<ArrowRef>> {
        let mut segs = vec![self.arrow_ref()?];
        while self.peek_tok(&Tok::Dot) {
            self.bump();
            segs.push(self.arrow_ref()?);
        }
        Ok(segs)
    }

    fn arrow_ref(&mut self) -> PResult<ArrowRef> {
        if self.peek_keyword("id") && self.peek2_tok(&Tok::LParen) {
            self.bump();
            self.expect(&Tok::LParen)?;
            let o = self.ident()?;
            self.expect(&Tok::RParen)?;
            Ok(ArrowRef::IdentityAt(o))
        } else {
            Ok(ArrowRef::Label(self.ident()?))
        }
    }

    fn poset(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        self.keyword("points")?;
        let mut points = Vec::new();
        while !self.peek_tok(&Tok::Semi) {
            points.push(self.ident()?);
        }
        self.expect(&Tok::Semi)?;
        let mut order = Vec::new();
        if self.peek_keyword("order") {
            self.bump();
            loop {
                let a = self.ident()?;
                self.expect(&Tok::Leq)?;
                let b = self.ident()?;
                order.push((a, b));
                if self.peek_tok(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(&Tok::Semi)?;
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Poset(PosetDecl { name, points, order }))
    }

    fn rational(&mut self) -> PResult<Rational> {
        if self.peek_keyword("inf") {
            self.bump();
            return Ok(Rational::Inf);
        }
        match self.bump() {
            Some(Token { tok: Tok::Int(n), .. }) => {
                if self.peek_tok(&Tok::Slash) {
                    self.bump();
                    match self.bump() {
                        Some(Token { tok: Tok::Int(d), span }) => {
                            if d == 0 {
                                return Err(Diagnostic::error(span, "zero denominator"));
                            }
                            Ok(Rational::Fin(n, d))
                        }
                        t => Err(Diagnostic::error(
                            t.map(|t| t.span).unwrap_or(self.here()),
                            "expected a denominator",
                        )),
                    }
                } else {
                    Ok(Rational::Fin(n, 1))
                }
            }
            t => Err(Diagnostic::error(
                t.map(|t| t.span).unwrap_or(self.here()),
                "expected a rational number",
            )),
        }
    }

    fn metric(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.expect(&Tok::LBrace)?;
        self.keyword("points")?;
        let mut points = Vec::new();
        while !self.peek_tok(&Tok::Semi) {
            points.push(self.ident()?);
        }
        self.expect(&Tok::Semi)?;
        let mut dists = Vec::new();
        if self.peek_keyword("dist") {
            self.bump();
            loop {
                let a = self.ident()?;
                let b = self.ident()?;
                self.expect(&Tok::Eq)?;
                let r = self.rational()?;
                dists.push((a, b, r));
                if self.peek_tok(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
            self.expect(&Tok::Semi)?;
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Metric(MetricDecl { name, points, dists }))
    }

    fn language(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        let base = if self.peek_keyword("for") {
            self.bump();
            let b = self.ident()?;
            match b.text.as_str() {
                "pos" => BaseKind::Pos,
                "met" => BaseKind::Met,
                other => {
                    return Err(Diagnostic::error(
                        b.span,
                        format!("unknown base `{other}` (expected pos or met)"),
                    ))
                }
            }
        } else {
            BaseKind::Cat
        };
        self.expect(&Tok::LBrace)?;
        let mut ops = Vec::new();
        while !self.peek_tok(&Tok::RBrace) {
            if self.peek_keyword("op2") {
                self.bump();
                let n = self.ident()?;
                self.expect(&Tok::Colon)?;
                let dom = self.ident()?;
                self.expect(&Tok::DArrow)?;
                let cod = self.ident()?;
                self.keyword("of")?;
                let arity = self.ident()?;
                self.expect(&Tok::Semi)?;
                ops.push(OpDecl::Op2 { name: n, dom, cod, arity });
            } else {
                self.keyword("op")?;
                let n = self.ident()?;
                self.expect(&Tok::Colon)?;
                let arity = self.ident()?;
                self.expect(&Tok::Semi)?;
                ops.push(OpDecl::Op { name: n, arity });
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Language(LanguageDecl { name, base, ops }))
    }

    fn theory(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.keyword("over")?;
        let language = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut judgements = Vec::new();
        while !self.peek_tok(&Tok::RBrace) {
            if self.peek_keyword("defined") {
                let span = self.bump().unwrap().span;
                let term = self.term()?;
                self.expect(&Tok::Semi)?;
                judgements.push(JudgementDecl::Defined { term, span });
            } else if self.peek_keyword("ineq") {
                let span = self.bump().unwrap().span;
                let lhs = self.term()?;
                self.expect(&Tok::Leq)?;
                let rhs = self.term()?;
                self.expect(&Tok::Semi)?;
                judgements.push(JudgementDecl::Inequality { lhs, rhs, span });
            } else {
                let span = self.keyword("eq")?;
                let lhs = self.term()?;
                self.expect(&Tok::Eq)?;
                let rhs = self.term()?;
                if self.peek_keyword("within") {
                    self.bump();
                    let eps = self.rational()?;
                    self.expect(&Tok::Semi)?;
                    judgements.push(JudgementDecl::Within { lhs, rhs, eps, span });
                } else {
                    self.expect(&Tok::Semi)?;
                    judgements.push(JudgementDecl::Equal { lhs, rhs, span });
                }
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Theory(TheoryDecl { name, language, judgements }))
    }

    pub(super) fn term(&mut self) -> PResult<TermExpr> {
        let head = self.ident()?;
        let span = head.span;
        match head.text.as_str() {
            "obj" => {
                self.expect(&Tok::LParen)?;
                let cat = self.ident()?;
                self.expect(&Tok::Dot)?;
                let object = self.ident()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Obj { cat, object })
            }
            "arr" => {
                self.expect(&Tok::LParen)?;
                let cat = self.ident()?;
                self.expect(&Tok::Dot)?;
                let arrow = self.arrow_ref()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Arr { cat, arrow })
            }
            "var" => {
                self.expect(&Tok::LParen)?;
                let arity = self.ident()?;
                self.expect(&Tok::Dot)?;
                let point = self.ident()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Var { arity, point })
            }
            "pow2" => {
                self.expect(&Tok::LParen)?;
                let inner = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Power2 { inner: Box::new(inner), span })
            }
            "comp" => {
                self.expect(&Tok::LParen)?;
                let lhs = self.term()?;
                self.expect(&Tok::Comma)?;
                let rhs = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Comp { lhs: Box::new(lhs), rhs: Box::new(rhs), span })
            }
            "inv" => {
                self.expect(&Tok::LParen)?;
                let inner = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Inv { inner: Box::new(inner), span })
            }
            "id" => {
                self.expect(&Tok::LParen)?;
                let inner = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::IdOf { inner: Box::new(inner), span })
            }
            "src" | "tgt" => {
                self.expect(&Tok::LParen)?;
                let inner = self.term()?;
                self.expect(&Tok::RParen)?;
                let end = if head.text == "src" { 0 } else { 1 };
                Ok(TermExpr::Endpoint { inner: Box::new(inner), end, span })
            }
            "pre" => {
                self.expect(&Tok::LParen)?;
                let inner = self.term()?;
                self.expect(&Tok::Semi)?;
                let functor = self.ident()?;
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Precompose { inner: Box::new(inner), functor, span })
            }
            "glue" => {
                self.expect(&Tok::LParen)?;
                let outer = self.term()?;
                self.expect(&Tok::Semi)?;
                let cover_cat = self.ident()?;
                self.keyword("by")?;
                self.expect(&Tok::LBrace)?;
                let mut gens = Vec::new();
                if !self.peek_tok(&Tok::RBrace) {
                    loop {
                        gens.push(self.gen_ref()?);
                        if self.peek_tok(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Tok::RBrace)?;
                let mut family = Vec::new();
                if self.peek_tok(&Tok::Semi) {
                    self.bump();
                    loop {
                        let g = self.gen_ref()?;
                        self.expect(&Tok::Arrow)?;
                        let t = self.term()?;
                        family.push((g, t));
                        if self.peek_tok(&Tok::Comma) {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(&Tok::RParen)?;
                Ok(TermExpr::Glue {
                    outer: Box::new(outer),
                    cover_cat,
                    gens,
                    family,
                    span,
                })
            }
            _ => {
                // A symbol, or a concrete application `f(args)`.
                if self.peek_tok(&Tok::LParen) {
                    self.bump();
                    let mut args = Vec::new();
                    if !self.peek_tok(&Tok::RParen) {
                        loop {
                            args.push(self.term()?);
                            if self.peek_tok(&Tok::Comma) {
                                self.bump();
                            } else {
                                break;
                            }
                        }
                    }
                    self.expect(&Tok::RParen)?;
                    Ok(TermExpr::Apply { sym: head, args, span })
                } else {
                    Ok(TermExpr::Symbol(head))
                }
            }
        }
    }

    fn gen_ref(&mut self) -> PResult<GenRef> {
        if self.peek_keyword("obj") {
            self.bump();
            self.expect(&Tok::LParen)?;
            let o = self.ident()?;
            self.expect(&Tok::RParen)?;
            Ok(GenRef::Object(o))
        } else {
            Ok(GenRef::Arrow(self.arrow_ref()?))
        }
    }

    fn structure(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.keyword("over")?;
        let language = self.ident()?;
        self.keyword("on")?;
        let carrier = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut interps = Vec::new();
        while !self.peek_tok(&Tok::RBrace) {
            let sym = self.ident()?;
            self.expect(&Tok::Eq)?;
            let kind = self.ident()?;
            match kind.text.as_str() {
                "functor" => {
                    self.expect(&Tok::LBrace)?;
                    let mut ob = Vec::new();
                    let mut arr = Vec::new();
                    while !self.peek_tok(&Tok::RBrace) {
                        if self.peek_keyword("obj") {
                            self.bump();
                            let k = self.index()?;
                            self.expect(&Tok::Arrow)?;
                            let v = self.ident()?;
                            self.expect(&Tok::Semi)?;
                            ob.push((k, v));
                        } else {
                            self.keyword("arr")?;
                            let k = self.index()?;
                            self.expect(&Tok::Arrow)?;
                            let v = self.arrow_ref()?;
                            self.expect(&Tok::Semi)?;
                            arr.push((k, v));
                        }
                    }
                    self.expect(&Tok::RBrace)?;
                    self.expect(&Tok::Semi)?;
                    interps.push(InterpDecl::Functor { sym, ob, arr });
                }
                "nat" => {
                    self.expect(&Tok::LBrace)?;
                    let mut comps = Vec::new();
                    while !self.peek_tok(&Tok::RBrace) {
                        let k = self.index()?;
                        self.expect(&Tok::Arrow)?;
                        let v = self.arrow_ref()?;
                        self.expect(&Tok::Semi)?;
                        comps.push((k, v));
                    }
                    self.expect(&Tok::RBrace)?;
                    self.expect(&Tok::Semi)?;
                    interps.push(InterpDecl::Nat { sym, comps });
                }
                "table" => {
                    self.expect(&Tok::LBrace)?;
                    let mut rows = Vec::new();
                    while !self.peek_tok(&Tok::RBrace) {
                        self.expect(&Tok::LParen)?;
                        let mut key = Vec::new();
                        if !self.peek_tok(&Tok::RParen) {
                            loop {
                                key.push(self.ident()?);
                                if self.peek_tok(&Tok::Comma) {
                                    self.bump();
                                } else {
                                    break;
                                }
                            }
                        }
                        self.expect(&Tok::RParen)?;
                        self.expect(&Tok::Arrow)?;
                        let v = self.ident()?;
                        self.expect(&Tok::Semi)?;
                        rows.push((key, v));
                    }
                    self.expect(&Tok::RBrace)?;
                    self.expect(&Tok::Semi)?;
                    interps.push(InterpDecl::Table { sym, rows });
                }
                other => {
                    return Err(Diagnostic::error(
                        kind.span,
                        format!("expected functor, nat, or table, found `{other}`"),
                    ))
                }
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Structure(StructureDecl { name, language, carrier, interps }))
    }

    fn index(&mut self) -> PResult<u32> {
        match self.bump() {
            Some(Token { tok: Tok::Int(v), span }) => u32::try_from(v)
                .map_err(|_| Diagnostic::error(span, "index must be non-negative")),
            t => Err(Diagnostic::error(
                t.map(|t| t.span).unwrap_or(self.here()),
                "expected an index",
            )),
        }
    }

    fn probes(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.keyword("over")?;
        let language = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut structures = Vec::new();
        loop {
            structures.push(self.ident()?);
            if self.peek_tok(&Tok::Comma) {
                self.bump();
            } else {
                break;
            }
        }
        self.expect(&Tok::Semi)?;
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Probes(ProbesDecl { name, language, structures }))
    }

    fn functor(&mut self) -> PResult<Decl> {
        let name = self.ident()?;
        self.expect(&Tok::Colon)?;
        let dom = self.ident()?;
        self.expect(&Tok::Arrow)?;
        let cod = self.ident()?;
        self.expect(&Tok::LBrace)?;
        let mut ob = Vec::new();
        let mut arr = Vec::new();
        while !self.peek_tok(&Tok::RBrace) {
            if self.peek_keyword("obj") {
                self.bump();
                let a = self.ident()?;
                self.expect(&Tok::Arrow)?;
                let b = self.ident()?;
                self.expect(&Tok::Semi)?;
                ob.push((a, b));
            } else {
                self.keyword("arr")?;
                let a = self.arrow_ref()?;
                self.expect(&Tok::Arrow)?;
                let b = self.arrow_ref()?;
                self.expect(&Tok::Semi)?;
                arr.push((a, b));
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(Decl::Functor(FunctorDecl { name, dom, cod, ob, arr }))
    }
}

/// Parses a standalone term (for `eval --term`).
pub fn parse_term(src: &str) -> Result<TermExpr, Vec<Diagnostic>> {
    let toks = lex(src).map_err(|d| vec![d])?;
    let mut p = Parser { toks, pos: 0 };
    let t = p.term().map_err(|d| vec![d])?;
    if !p.at_end() {
        return Err(vec![Diagnostic::error(
            p.here(),
            "unexpected trailing input after term",
        )]);
    }
    Ok(t)
}
