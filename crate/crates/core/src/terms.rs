//! The two-dimensional term calculus over finite category arities.
//!
//! Terms are built from four formation rules: objects and arrows of the
//! arity category (rule 1), function symbols of a language (rule 2), the
//! power of a 1-term by the walking arrow (rule 3), and gluing a family of
//! terms along a generating family (rule 4). Everything else — 2-cell
//! composition, inversion, identities, endpoints, precomposition,
//! sum-superposition, and power elimination — is a derived constructor
//! that lowers to these rules.
//!
//! Terms are immutable shared trees; structural equality is cheap and is
//! distinct from the semantic equivalence that [`crate::free`]
//! approximates with probes.

use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::fincat::{
    canonical_generators, is_epi, FinCat, FinFunctor, GeneratingFamily, Generator, ImageClosure,
};

/// Term dimension: 1-terms interpret as functors, 2-terms as natural
/// transformations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    One,
    Two,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("object {object} does not exist in the arity category")]
    UnknownObject { object: usize },
    #[error("arrow {arrow} does not exist in the arity category")]
    UnknownArrow { arrow: usize },
    #[error("language has no symbol named {name:?} of the requested kind")]
    UnknownSymbol { name: String },
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },
    #[error("arity mismatch: {context}")]
    ArityMismatch { context: String },
    #[error("family does not match the generating family: {context}")]
    FamilyIndexMismatch { context: String },
    #[error("functor is not an epimorphism")]
    NotEpi,
}

/// A 1-dimensional function symbol: a name with an input arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnSym {
    pub name: String,
    pub arity: Arc<FinCat>,
}

/// A 2-dimensional function symbol between two 1-symbols of the same arity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnSym2 {
    pub name: String,
    pub arity: Arc<FinCat>,
    /// Index of the domain symbol in the language's 1-symbol list.
    pub dom: usize,
    /// Index of the codomain symbol.
    pub cod: usize,
}

/// A language: 1-dimensional and 2-dimensional function symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub name: String,
    syms1: Vec<FnSym>,
    syms2: Vec<FnSym2>,
}

impl Language {
    pub fn empty(name: impl Into<String>) -> Language {
        Language { name: name.into(), syms1: Vec::new(), syms2: Vec::new() }
    }

    pub fn new(
        name: impl Into<String>,
        syms1: Vec<FnSym>,
        syms2: Vec<(String, usize, usize)>,
    ) -> Result<Language, TermError> {
        let name = name.into();
        let mut lang = Language { name, syms1, syms2: Vec::new() };
        let mut seen = std::collections::HashSet::new();
        for s in &lang.syms1 {
            if !seen.insert(s.name.clone()) {
                return Err(TermError::UnknownSymbol {
                    name: format!("duplicate symbol {}", s.name),
                });
            }
        }
        for (name, dom, cod) in syms2 {
            let (d, c) = match (lang.syms1.get(dom), lang.syms1.get(cod)) {
                (Some(d), Some(c)) => (d, c),
                _ => return Err(TermError::UnknownSymbol { name }),
            };
            if d.arity != c.arity {
                return Err(TermError::ArityMismatch {
                    context: format!("2-symbol {name} endpoints have different arities"),
                });
            }
            if !seen.insert(name.clone()) {
                return Err(TermError::UnknownSymbol {
                    name: format!("duplicate symbol {name}"),
                });
            }
            let arity = d.arity.clone();
            lang.syms2.push(FnSym2 { name, arity, dom, cod });
        }
        Ok(lang)
    }

    pub fn syms1(&self) -> &[FnSym] {
        &self.syms1
    }

    pub fn syms2(&self) -> &[FnSym2] {
        &self.syms2
    }

    pub fn sym1_index(&self, name: &str) -> Option<usize> {
        self.syms1.iter().position(|s| s.name == name)
    }

    pub fn sym2_index(&self, name: &str) -> Option<usize> {
        self.syms2.iter().position(|s| s.name == name)
    }
}

/// Reference to a 1-symbol, embedded in terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymRef {
    pub name: String,
    pub arity: Arc<FinCat>,
}

/// Reference to a 2-symbol, embedded in terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sym2Ref {
    pub name: String,
    pub arity: Arc<FinCat>,
    pub dom_name: String,
    pub cod_name: String,
}

/// One node of a term tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermNode {
    /// Rule 1, dimension 1: an object of the arity category.
    VarObj { arity: Arc<FinCat>, object: usize },
    /// Rule 1, dimension 2: an arrow of the arity category.
    VarArr { arity: Arc<FinCat>, arrow: usize },
    /// Rule 2, dimension 1.
    Sym(SymRef),
    /// Rule 2, dimension 2.
    Sym2(Sym2Ref),
    /// Rule 3: the power of a 1-term by the walking arrow.
    Power2 { inner: Term },
    /// Rule 4: gluing a generator-indexed family under an outer term.
    ///
    /// `family` is aligned with `cover.generators()`: arrow generators take
    /// 2-terms, object generators take 1-terms, all of arity `arity`.
    Glue { outer: Term, cover: GeneratingFamily, arity: Arc<FinCat>, family: Vec<Term> },
}

/// An immutable term with its computed input arity and dimension.
#[derive(Debug, Clone)]
pub struct Term {
    node: Arc<TermNode>,
    arity: Arc<FinCat>,
    dim: Dim,
    hash: u64,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.hash == other.hash
            && (Arc::ptr_eq(&self.node, &other.node) || self.node == other.node)
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.hash.hash(state);
    }
}

fn node_hash(node: &TermNode) -> u64 {
    // FNV-1a over the node structure, using category fingerprints.
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |v: u64| {
        h ^= v;
        h = h.wrapping_mul(0x100000001b3);
    };
    match node {
        TermNode::VarObj { arity, object } => {
            eat(1);
            eat(arity.fingerprint());
            eat(*object as u64);
        }
        TermNode::VarArr { arity, arrow } => {
            eat(2);
            eat(arity.fingerprint());
            eat(*arrow as u64);
        }
        TermNode::Sym(s) => {
            eat(3);
            eat(s.arity.fingerprint());
            for b in s.name.bytes() {
                eat(b as u64);
            }
        }
        TermNode::Sym2(s) => {
            eat(4);
            eat(s.arity.fingerprint());
            for b in s.name.bytes() {
                eat(b as u64);
            }
        }
        TermNode::Power2 { inner } => {
            eat(5);
            eat(inner.hash);
        }
        TermNode::Glue { outer, cover, arity, family } => {
            eat(6);
            eat(outer.hash);
            eat(arity.fingerprint());
            eat(cover.codomain().fingerprint());
            for g in cover.generators() {
                match g {
                    Generator::Arrow(a) => {
                        eat(7);
                        eat(*a as u64);
                    }
                    Generator::Object(o) => {
                        eat(8);
                        eat(*o as u64);
                    }
                }
            }
            for t in family {
                eat(t.hash);
            }
        }
    }
    h
}

/// The walking-arrow category, shared by rule 3 and the derived
/// constructors.
pub fn walking_arrow() -> Arc<FinCat> {
    static CELL: OnceLock<Arc<FinCat>> = OnceLock::new();
    CELL.get_or_init(FinCat::two).clone()
}

fn walking_composite() -> Arc<FinCat> {
    static CELL: OnceLock<Arc<FinCat>> = OnceLock::new();
    CELL.get_or_init(FinCat::three).clone()
}

fn walking_iso() -> Arc<FinCat> {
    static CELL: OnceLock<Arc<FinCat>> = OnceLock::new();
    CELL.get_or_init(FinCat::iso).clone()
}

fn terminal() -> Arc<FinCat> {
    static CELL: OnceLock<Arc<FinCat>> = OnceLock::new();
    CELL.get_or_init(FinCat::one).clone()
}

impl Term {
    fn make(node: TermNode, arity: Arc<FinCat>, dim: Dim) -> Term {
        let hash = node_hash(&node);
        Term { node: Arc::new(node), arity, dim, hash }
    }

    pub fn node(&self) -> &TermNode {
        &self.node
    }

    pub fn arity(&self) -> &Arc<FinCat> {
        &self.arity
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    /// Rule 1: the term picking an object of the arity category.
    pub fn var_obj(arity: &Arc<FinCat>, object: usize) -> Result<Term, TermError> {
        if object >= arity.n_objects() {
            return Err(TermError::UnknownObject { object });
        }
        Ok(Term::make(
            TermNode::VarObj { arity: arity.clone(), object },
            arity.clone(),
            Dim::One,
        ))
    }

    /// Rule 1: the 2-term picking an arrow of the arity category.
    pub fn var_arr(arity: &Arc<FinCat>, arrow: usize) -> Result<Term, TermError> {
        if arrow >= arity.n_arrows() {
            return Err(TermError::UnknownArrow { arrow });
        }
        Ok(Term::make(
            TermNode::VarArr { arity: arity.clone(), arrow },
            arity.clone(),
            Dim::Two,
        ))
    }

    /// Rule 2 for 1-symbols.
    pub fn sym(lang: &Language, name: &str) -> Result<Term, TermError> {
        let idx = lang
            .sym1_index(name)
            .ok_or_else(|| TermError::UnknownSymbol { name: name.into() })?;
        let s = &lang.syms1()[idx];
        Ok(Term::make(
            TermNode::Sym(SymRef { name: s.name.clone(), arity: s.arity.clone() }),
            s.arity.clone(),
            Dim::One,
        ))
    }

    /// Rule 2 for 2-symbols.
    pub fn sym2(lang: &Language, name: &str) -> Result<Term, TermError> {
        let idx = lang
            .sym2_index(name)
            .ok_or_else(|| TermError::UnknownSymbol { name: name.into() })?;
        let s = &lang.syms2()[idx];
        Ok(Term::make(
            TermNode::Sym2(Sym2Ref {
                name: s.name.clone(),
                arity: s.arity.clone(),
                dom_name: lang.syms1()[s.dom].name.clone(),
                cod_name: lang.syms1()[s.cod].name.clone(),
            }),
            s.arity.clone(),
            Dim::Two,
        ))
    }

    /// Rule 3: the power of a 1-term, a 2-term of arity `2 × X`.
    ///
    /// Powers of 2-terms are deliberately not representable; use
    /// [`Term::eliminate_power2`] for the five equivalent forms.
    pub fn power2(inner: Term) -> Result<Term, TermError> {
        if inner.dim != Dim::One {
            return Err(TermError::DimensionMismatch {
                context: "the power rule applies to 1-terms only".into(),
            });
        }
        let arity = FinCat::product(&walking_arrow(), &inner.arity);
        Ok(Term::make(TermNode::Power2 { inner }, arity, Dim::Two))
    }

    /// Rule 4: glues a generator-indexed family under an outer term.
    ///
    /// The family is indexed by `cover.generators()` in order; arrow
    /// generators take 2-terms and object generators take 1-terms, all of a
    /// common arity (inferred from the first member; use
    /// [`Term::glue_with_arity`] when the family is empty).
    pub fn glue(
        outer: Term,
        cover: GeneratingFamily,
        family: Vec<Term>,
    ) -> Result<Term, TermError> {
        let arity = family
            .first()
            .map(|t| t.arity.clone())
            .ok_or_else(|| TermError::FamilyIndexMismatch {
                context: "empty family needs an explicit arity".into(),
            })?;
        Term::glue_with_arity(outer, cover, family, arity)
    }

    /// Rule 4 with the result arity given explicitly.
    pub fn glue_with_arity(
        outer: Term,
        cover: GeneratingFamily,
        family: Vec<Term>,
        arity: Arc<FinCat>,
    ) -> Result<Term, TermError> {
        if cover.codomain() != &outer.arity {
            return Err(TermError::ArityMismatch {
                context: "generating family must live on the outer term's arity".into(),
            });
        }
        if family.len() != cover.generators().len() {
            return Err(TermError::FamilyIndexMismatch {
                context: format!(
                    "family has {} members for {} generators",
                    family.len(),
                    cover.generators().len()
                ),
            });
        }
        for (g, t) in cover.generators().iter().zip(&family) {
            let want = match g {
                Generator::Arrow(_) => Dim::Two,
                Generator::Object(_) => Dim::One,
            };
            if t.dim != want {
                return Err(TermError::DimensionMismatch {
                    context: "arrow generators take 2-terms, object generators 1-terms".into(),
                });
            }
            if t.arity != arity {
                return Err(TermError::ArityMismatch {
                    context: "family members must share one input arity".into(),
                });
            }
        }
        let dim = outer.dim;
        Ok(Term::make(
            TermNode::Glue { outer, cover, arity: arity.clone(), family },
            arity,
            dim,
        ))
    }

    /// Vertical composite `sigma ∘ tau` of two 2-terms of one arity, glued
    /// along the composable-pair category.
    pub fn compose2(sigma: Term, tau: Term) -> Result<Term, TermError> {
        if sigma.dim != Dim::Two || tau.dim != Dim::Two {
            return Err(TermError::DimensionMismatch {
                context: "compose2 needs two 2-terms".into(),
            });
        }
        if sigma.arity != tau.arity {
            return Err(TermError::ArityMismatch {
                context: "compose2 needs a common arity".into(),
            });
        }
        let three = walking_composite();
        let a01 = three.arrow_by_label("a01").expect("chain arrows");
        let a12 = three.arrow_by_label("a12").expect("chain arrows");
        let a02 = three.arrow_by_label("a02").expect("chain arrows");
        let cover = GeneratingFamily::validate(
            three.clone(),
            vec![Generator::Arrow(a01), Generator::Arrow(a12)],
        )
        .expect("chain generators are valid");
        let outer = Term::var_arr(&three, a02)?;
        Term::glue(outer, cover, vec![tau, sigma])
    }

    /// Formal inverse of a 2-term, glued along the walking isomorphism.
    pub fn invert2(sigma: Term) -> Result<Term, TermError> {
        if sigma.dim != Dim::Two {
            return Err(TermError::DimensionMismatch {
                context: "invert2 needs a 2-term".into(),
            });
        }
        let iso = walking_iso();
        let u = iso.arrow_by_label("u").expect("iso arrows");
        let v = iso.arrow_by_label("v").expect("iso arrows");
        let cover = GeneratingFamily::validate(iso.clone(), vec![Generator::Arrow(u)])
            .expect("iso generator is valid");
        let outer = Term::var_arr(&iso, v)?;
        Term::glue(outer, cover, vec![sigma])
    }

    /// Identity 2-cell on a 1-term, glued along the point summand of the
    /// terminal category.
    pub fn identity2(t: Term) -> Result<Term, TermError> {
        if t.dim != Dim::One {
            return Err(TermError::DimensionMismatch {
                context: "identity2 needs a 1-term".into(),
            });
        }
        let one = terminal();
        let cover = GeneratingFamily::validate(one.clone(), vec![Generator::Object(0)])
            .expect("point generator is valid");
        let outer = Term::var_arr(&one, one.identity(0) as usize)?;
        Term::glue(outer, cover, vec![t])
    }

    /// Domain (`end = 0`) or codomain (`end = 1`) 1-term of a 2-term.
    pub fn endpoint(sigma: Term, end: usize) -> Result<Term, TermError> {
        if sigma.dim != Dim::Two {
            return Err(TermError::DimensionMismatch {
                context: "endpoint needs a 2-term".into(),
            });
        }
        if end > 1 {
            return Err(TermError::UnknownObject { object: end });
        }
        let two = walking_arrow();
        let u = two.arrow_by_label("u").expect("walking arrow");
        let cover = GeneratingFamily::validate(two.clone(), vec![Generator::Arrow(u)])
            .expect("walking-arrow generator is valid");
        let outer = Term::var_obj(&two, end)?;
        Term::glue(outer, cover, vec![sigma])
    }

    /// Precomposition `s(h)` along a functor `h` out of the term's arity,
    /// encoded by gluing variable terms over a canonical generating family.
    pub fn precompose(s: Term, h: &FinFunctor) -> Result<Term, TermError> {
        if h.dom() != &s.arity {
            return Err(TermError::ArityMismatch {
                context: "precompose needs a functor out of the term's arity".into(),
            });
        }
        let gens = canonical_generators(h.dom());
        let cover = GeneratingFamily::validate(h.dom().clone(), gens.clone())
            .expect("canonical generators are valid");
        let target = h.cod().clone();
        let family: Result<Vec<Term>, TermError> = gens
            .iter()
            .map(|g| match *g {
                Generator::Arrow(a) => Term::var_arr(&target, h.arr(a)),
                Generator::Object(o) => Term::var_obj(&target, h.ob(o)),
            })
            .collect();
        Term::glue_with_arity(s, cover, family?, target)
    }

    /// Superposition of a family with distinct arities: each member is
    /// precomposed along its coproduct injection, then glued.
    pub fn sum_superpose(
        outer: Term,
        cover: GeneratingFamily,
        family: Vec<Term>,
    ) -> Result<Term, TermError> {
        if family.len() != cover.generators().len() {
            return Err(TermError::FamilyIndexMismatch {
                context: format!(
                    "family has {} members for {} generators",
                    family.len(),
                    cover.generators().len()
                ),
            });
        }
        let arities: Vec<Arc<FinCat>> = family.iter().map(|t| t.arity.clone()).collect();
        let (_, injections) = FinCat::coproduct_with_injections(&arities);
        let shifted: Result<Vec<Term>, TermError> = family
            .into_iter()
            .zip(&injections)
            .map(|(t, inj)| Term::precompose(t, inj))
            .collect();
        let shifted = shifted?;
        let total = shifted
            .first()
            .map(|t| t.arity.clone())
            .unwrap_or_else(FinCat::empty);
        Term::glue_with_arity(outer, cover, shifted, total)
    }

    /// The five ways a would-be power of a 2-term reduces to existing
    /// constructors (see [`Power2Case`]).
    pub fn eliminate_power2(tau: &Term, case: Power2Case) -> Result<Term, TermError> {
        if tau.dim != Dim::Two {
            return Err(TermError::DimensionMismatch {
                context: "power elimination applies to 2-terms".into(),
            });
        }
        match case {
            Power2Case::DomainPower => Term::power2(Term::endpoint(tau.clone(), 0)?),
            Power2Case::CodomainPower => Term::power2(Term::endpoint(tau.clone(), 1)?),
            Power2Case::RestrictAt0 => Term::precompose(tau.clone(), &factor_injection(tau, 0)),
            Power2Case::RestrictAt1 => Term::precompose(tau.clone(), &factor_injection(tau, 1)),
            Power2Case::Diagonal => {
                let first = Term::power2(Term::endpoint(tau.clone(), 0)?)?;
                let second = Term::precompose(tau.clone(), &factor_injection(tau, 1))?;
                Term::compose2(second, first)
            }
        }
    }

    /// Trace term: replays, in syntax, the derivation of an arrow of the
    /// codomain of an epimorphism whose domain arrows carry 2-term labels.
    pub fn epi_trace_term(
        e: &FinFunctor,
        labels: &[Term],
        target_arrow: usize,
    ) -> Result<Term, TermError> {
        if labels.len() != e.dom().n_arrows() {
            return Err(TermError::FamilyIndexMismatch {
                context: "one label per domain arrow required".into(),
            });
        }
        if !is_epi(e) {
            return Err(TermError::NotEpi);
        }
        let closure = ImageClosure::of_functor(e);
        let err = std::cell::RefCell::new(None::<TermError>);
        let result = closure.replay(
            target_arrow,
            &mut |dom_arrow| labels[dom_arrow].clone(),
            &mut |g, f| match Term::compose2(g, f.clone()) {
                Ok(t) => t,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    f
                }
            },
            &mut |t| match Term::invert2(t.clone()) {
                Ok(r) => r,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    t
                }
            },
        );
        if let Some(e) = err.into_inner() {
            return Err(e);
        }
        result.ok_or(TermError::NotEpi)
    }
}

/// The injection `X -> 2 × X` at end `i` of the walking arrow.
fn factor_injection(tau: &Term, end: usize) -> FinFunctor {
    let x = tau.arity();
    let two = walking_arrow();
    let prod = FinCat::product(&two, x);
    let n_obj = x.n_objects();
    let n_arr = x.n_arrows();
    let ob_map = (0..n_obj).map(|o| (end * n_obj + o) as u32).collect();
    let id_end = two.identity(end) as usize;
    let arr_map = (0..n_arr).map(|a| (id_end * n_arr + a) as u32).collect();
    FinFunctor::new_unchecked(x.clone(), prod, ob_map, arr_map)
}

/// Which arrow of `2 × 2` a would-be 2-term power is taken at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power2Case {
    /// The power of the domain 1-term.
    DomainPower,
    /// The power of the codomain 1-term.
    CodomainPower,
    /// The 2-term restricted along the end-0 injection.
    RestrictAt0,
    /// The 2-term restricted along the end-1 injection.
    RestrictAt1,
    /// The diagonal: composite of the end-1 restriction after the domain
    /// power.
    Diagonal,
}

impl Power2Case {
    pub const ALL: [Power2Case; 5] = [
        Power2Case::DomainPower,
        Power2Case::CodomainPower,
        Power2Case::RestrictAt0,
        Power2Case::RestrictAt1,
        Power2Case::Diagonal,
    ];
}

/// A judgement: a definedness assertion or an equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Judgement {
    Defined(Term),
    Equal(Term, Term),
}

impl Judgement {
    pub fn equal(s: Term, t: Term) -> Result<Judgement, TermError> {
        if s.arity() != t.arity() || s.dim() != t.dim() {
            return Err(TermError::ArityMismatch {
                context: "equation operands must share arity and dimension".into(),
            });
        }
        Ok(Judgement::Equal(s, t))
    }
}

/// An equational theory over a language.
#[derive(Debug, Clone)]
pub struct Theory {
    pub name: String,
    pub language: Arc<Language>,
    pub judgements: Vec<Judgement>,
}

impl Theory {
    pub fn new(
        name: impl Into<String>,
        language: Arc<Language>,
        judgements: Vec<Judgement>,
    ) -> Result<Theory, TermError> {
        let theory = Theory { name: name.into(), language, judgements };
        for j in &theory.judgements {
            match j {
                Judgement::Defined(t) => theory.check_term(t)?,
                Judgement::Equal(s, t) => {
                    theory.check_term(s)?;
                    theory.check_term(t)?;
                    if s.arity() != t.arity() || s.dim() != t.dim() {
                        return Err(TermError::ArityMismatch {
                            context: "equation operands must share arity and dimension".into(),
                        });
                    }
                }
            }
        }
        Ok(theory)
    }

    /// Checks that every symbol in the term exists in the language with the
    /// same arity.
    pub fn check_term(&self, t: &Term) -> Result<(), TermError> {
        check_term_in(&self.language, t)
    }
}

/// Checks that every symbol in a term exists in a language with a matching
/// arity.
pub fn check_term_in(language: &Language, t: &Term) -> Result<(), TermError> {
    match t.node() {
        TermNode::VarObj { .. } | TermNode::VarArr { .. } => Ok(()),
        TermNode::Sym(s) => match language.sym1_index(&s.name) {
            Some(i) if language.syms1()[i].arity == s.arity => Ok(()),
            _ => Err(TermError::UnknownSymbol { name: s.name.clone() }),
        },
        TermNode::Sym2(s) => match language.sym2_index(&s.name) {
            Some(i) if language.syms2()[i].arity == s.arity => Ok(()),
            _ => Err(TermError::UnknownSymbol { name: s.name.clone() }),
        },
        TermNode::Power2 { inner } => check_term_in(language, inner),
        TermNode::Glue { outer, family, .. } => {
            check_term_in(language, outer)?;
            family.iter().try_for_each(|m| check_term_in(language, m))
        }
    }
}

impl std::fmt::Display for Term {
    /// Compact rendering used in reports; mirrors the DSL surface syntax
    /// with raw labels for objects and arrows.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.node() {
            TermNode::VarObj { arity, object } => {
                write!(f, "obj({})", arity.object_label(*object))
            }
            TermNode::VarArr { arity, arrow } => write!(f, "arr({})", arity.arrow_label(*arrow)),
            TermNode::Sym(s) => write!(f, "{}", s.name),
            TermNode::Sym2(s) => write!(f, "{}", s.name),
            TermNode::Power2 { inner } => write!(f, "pow2({inner})"),
            TermNode::Glue { outer, cover, family, .. } => {
                write!(f, "glue({outer}; by {{")?;
                for (i, g) in cover.generators().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    match g {
                        Generator::Arrow(a) => {
                            write!(f, "{}", cover.codomain().arrow_label(*a))?
                        }
                        Generator::Object(o) => {
                            write!(f, "obj({})", cover.codomain().object_label(*o))?
                        }
                    }
                }
                write!(f, "}}")?;
                for (g, t) in cover.generators().iter().zip(family) {
                    match g {
                        Generator::Arrow(a) => {
                            write!(f, "; {} -> {t}", cover.codomain().arrow_label(*a))?
                        }
                        Generator::Object(o) => {
                            write!(f, "; obj({}) -> {t}", cover.codomain().object_label(*o))?
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}
