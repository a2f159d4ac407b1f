//! Interpretation and interpretability of terms over finite Cat-structures,
//! judgement and model checking, and structure-morphism validation.
//!
//! Interpretations are tables over materialized functor categories: a
//! 1-term denotes a functor `A^X -> A` (object and arrow index maps), a
//! 2-term denotes a natural transformation between two such functors. The
//! gluing rule interprets by assembling the generator-indexed family into a
//! functor into `A^Y`, pointwise on objects and then on arrows, with the
//! first failing obligation reported as the witness. Non-interpretability
//! is a value, not an error: judgements routinely mix definedness and
//! equations, so partiality is the normal regime.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::budget::Budget;
use crate::fincat::{CatError, FinCat, FinFunctor, GenSeed, Generator, HomCat};
use crate::terms::{check_term_in, Dim, Language, Judgement, Power2Case, Term, TermError, TermNode, Theory};
use crate::verdict::Verdict;

/// Hard errors: malformed inputs or exhausted budgets. Failed assembly is
/// *not* an error; it is the `NotInterpretable` outcome.
#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error(transparent)]
    Cat(#[from] CatError),
    #[error(transparent)]
    Term(#[from] TermError),
}

/// A structure: a finite carrier with an interpretation of every symbol.
#[derive(Debug, Clone)]
pub struct CatStructure {
    pub name: String,
    language: Arc<Language>,
    carrier: Arc<FinCat>,
    /// Functor tables `A^{arity} -> A`, aligned with `language.syms1()`.
    interp1: Vec<SymTable>,
    /// Component tables, aligned with `language.syms2()`.
    interp2: Vec<Vec<u32>>,
    /// Hom categories for the symbol arities, aligned with syms1.
    homs1: Vec<Arc<HomCat>>,
}

/// Functor `A^X -> A` as flat index maps over a materialized `HomCat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymTable {
    /// Image object per functor index.
    pub ob: Vec<u32>,
    /// Image arrow per transformation index.
    pub arr: Vec<u32>,
}

impl CatStructure {
    /// A structure over the empty language: just a carrier.
    pub fn empty_lang(name: impl Into<String>, lang: Arc<Language>, carrier: Arc<FinCat>) -> CatStructure {
        assert!(
            lang.syms1().is_empty() && lang.syms2().is_empty(),
            "empty_lang needs a language without symbols"
        );
        CatStructure {
            name: name.into(),
            language: lang,
            carrier,
            interp1: Vec::new(),
            interp2: Vec::new(),
            homs1: Vec::new(),
        }
    }

    /// Builds and validates a structure from explicit tables, one per
    /// symbol in language order.
    pub fn new(
        name: impl Into<String>,
        language: Arc<Language>,
        carrier: Arc<FinCat>,
        interp1: Vec<SymTable>,
        interp2: Vec<Vec<u32>>,
        budget: &Budget,
    ) -> Result<CatStructure, EvalError> {
        if interp1.len() != language.syms1().len() || interp2.len() != language.syms2().len() {
            return Err(CatError::Malformed("one table per symbol required".into()).into());
        }
        let mut homs1 = Vec::with_capacity(interp1.len());
        for (sym, table) in language.syms1().iter().zip(&interp1) {
            let hom = HomCat::build(sym.arity.clone(), carrier.clone(), budget)?;
            validate_sym_table(&hom, &carrier, table)
                .map_err(|m| CatError::Malformed(format!("symbol {}: {m}", sym.name)))?;
            homs1.push(hom);
        }
        for (sym, comps) in language.syms2().iter().zip(&interp2) {
            let hom = &homs1[sym.dom];
            let f = &interp1[sym.dom];
            let g = &interp1[sym.cod];
            validate_components(hom, &carrier, f, g, comps)
                .map_err(|m| CatError::Malformed(format!("2-symbol {}: {m}", sym.name)))?;
        }
        Ok(CatStructure { name: name.into(), language, carrier, interp1, interp2, homs1 })
    }

    pub fn language(&self) -> &Arc<Language> {
        &self.language
    }

    pub fn carrier(&self) -> &Arc<FinCat> {
        &self.carrier
    }

    pub fn sym_table(&self, idx: usize) -> &SymTable {
        &self.interp1[idx]
    }

    pub fn sym2_components(&self, idx: usize) -> &[u32] {
        &self.interp2[idx]
    }

    pub fn sym_hom(&self, idx: usize) -> &Arc<HomCat> {
        &self.homs1[idx]
    }
}

fn validate_sym_table(hom: &HomCat, carrier: &FinCat, t: &SymTable) -> Result<(), String> {
    if t.ob.len() != hom.n_functors() || t.arr.len() != hom.n_transfs() {
        return Err("table sizes do not match the functor category".into());
    }
    for tr in 0..hom.n_transfs() {
        let a = t.arr[tr] as usize;
        if carrier.src(a) != t.ob[hom.tr_src(tr)] as usize
            || carrier.tgt(a) != t.ob[hom.tr_tgt(tr)] as usize
        {
            return Err(format!("arrow image at transformation {tr} breaks endpoints"));
        }
    }
    for f in 0..hom.n_functors() {
        if t.arr[hom.identity_transf(f)] != carrier.identity(t.ob[f] as usize) {
            return Err(format!("identity at functor {f} not preserved"));
        }
    }
    for t2 in 0..hom.n_transfs() {
        for t1 in 0..hom.n_transfs() {
            if let Some(c) = hom.compose_transf(t2, t1) {
                if carrier.compose(t.arr[t2] as usize, t.arr[t1] as usize)
                    != Some(t.arr[c] as usize)
                {
                    return Err(format!("composition broken at ({t2}, {t1})"));
                }
            }
        }
    }
    Ok(())
}

fn validate_components(
    hom: &HomCat,
    carrier: &FinCat,
    f: &SymTable,
    g: &SymTable,
    comps: &[u32],
) -> Result<(), String> {
    if comps.len() != hom.n_functors() {
        return Err("one component per functor required".into());
    }
    for (i, &c) in comps.iter().enumerate() {
        let c = c as usize;
        if carrier.src(c) != f.ob[i] as usize || carrier.tgt(c) != g.ob[i] as usize {
            return Err(format!("component at functor {i} has wrong endpoints"));
        }
    }
    for t in 0..hom.n_transfs() {
        let (i, j) = (hom.tr_src(t), hom.tr_tgt(t));
        let left = carrier.compose(comps[j] as usize, f.arr[t] as usize);
        let right = carrier.compose(g.arr[t] as usize, comps[i] as usize);
        if left != right || left.is_none() {
            return Err(format!("naturality broken at transformation {t}"));
        }
    }
    Ok(())
}

/// Interpretation of a 1-term: a functor `A^X -> A` over the hom category.
#[derive(Debug, Clone)]
pub struct InterpFun {
    pub hom: Arc<HomCat>,
    pub ob: Vec<u32>,
    pub arr: Vec<u32>,
}

impl PartialEq for InterpFun {
    fn eq(&self, other: &Self) -> bool {
        self.ob == other.ob && self.arr == other.arr
    }
}

/// Interpretation of a 2-term: a natural transformation between two
/// functors `A^X -> A`, with its endpoint tables.
#[derive(Debug, Clone)]
pub struct InterpNat {
    pub hom: Arc<HomCat>,
    pub src: SymTable,
    pub tgt: SymTable,
    /// One carrier arrow per functor of `A^X`.
    pub comp: Vec<u32>,
}

impl PartialEq for InterpNat {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src && self.tgt == other.tgt && self.comp == other.comp
    }
}

#[derive(Debug, Clone)]
pub enum Interp {
    One(InterpFun),
    Two(InterpNat),
}

/// Why an assembly failed, with enough context to debug a theory.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub enum ObligationKind {
    /// Two generators force different objects at a point of the gluing
    /// codomain.
    EndpointClash { at_functor: usize, y_object: usize },
    /// A derived arrow needs an inverse the carrier does not have.
    MissingInverse { at_functor: usize, y_arrow: usize, carrier_arrow: usize },
    /// The assembled assignment breaks a composition of the codomain.
    CompositionViolated { at_functor: usize, y_g: usize, y_f: usize },
    /// The assembled assignment sends an identity to a non-identity.
    IdentityViolated { at_functor: usize, y_object: usize },
    /// The family's arrow action disagrees at a shared object.
    ComponentClash { at_transf: usize, y_object: usize },
    /// The assembled components are not natural at an arrow of the codomain.
    NaturalityBroken { at_transf: usize, y_arrow: usize },
}

/// The innermost failing gluing node and the obligation that failed.
#[derive(Debug, Clone)]
pub struct Obligation {
    /// Rendering of the gluing node that failed.
    pub at_term: String,
    pub kind: ObligationKind,
}

/// The outcome of interpretation: partiality is a value.
#[derive(Debug, Clone)]
pub enum Outcome {
    Interpreted(Interp),
    NotInterpretable(Obligation),
}

impl Outcome {
    pub fn is_interpretable(&self) -> bool {
        matches!(self, Outcome::Interpreted(_))
    }

    pub fn interp(&self) -> Option<&Interp> {
        match self {
            Outcome::Interpreted(i) => Some(i),
            Outcome::NotInterpretable(_) => None,
        }
    }
}

/// Witness payload for judgement verdicts.
#[derive(Debug, Clone, Serialize)]
pub enum CatWitness {
    /// Interpretability failed with this obligation.
    Assembly { at_term: String, kind: ObligationKind },
    /// Interpretations differ at an object of `A^X`.
    AtFunctor { functor: usize, description: String },
    /// Interpretations differ at an arrow of `A^X`.
    AtTransf { transf: usize, description: String },
}

pub type CatVerdict = Verdict<CatWitness>;

/// Evaluator over one structure, caching hom categories by arity.
pub struct Evaluator<'a> {
    structure: &'a CatStructure,
    budget: &'a Budget,
    homs: RefCell<HashMap<u64, Vec<Arc<HomCat>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a CatStructure, budget: &'a Budget) -> Evaluator<'a> {
        let ev = Evaluator { structure, budget, homs: RefCell::new(HashMap::new()) };
        for hom in &structure.homs1 {
            ev.homs
                .borrow_mut()
                .entry(hom.dom().fingerprint())
                .or_default()
                .push(hom.clone());
        }
        ev
    }

    pub fn structure(&self) -> &CatStructure {
        self.structure
    }

    /// The materialized functor category `A^X`, cached per arity.
    pub fn hom(&self, x: &Arc<FinCat>) -> Result<Arc<HomCat>, EvalError> {
        if let Some(bucket) = self.homs.borrow().get(&x.fingerprint()) {
            if let Some(h) = bucket.iter().find(|h| h.dom() == x) {
                return Ok(h.clone());
            }
        }
        let hom = HomCat::build(x.clone(), self.structure.carrier.clone(), self.budget)?;
        self.homs
            .borrow_mut()
            .entry(x.fingerprint())
            .or_default()
            .push(hom.clone());
        Ok(hom)
    }

    /// Interprets a term over the structure.
    pub fn interpret(&self, t: &Term) -> Result<Outcome, EvalError> {
        check_term_in(&self.structure.language, t)?;
        self.interpret_rec(t)
    }

    fn interpret_rec(&self, t: &Term) -> Result<Outcome, EvalError> {
        let carrier = &self.structure.carrier;
        match t.node() {
            TermNode::VarObj { arity, object } => {
                let hom = self.hom(arity)?;
                let ob = (0..hom.n_functors())
                    .map(|f| hom.fn_ob(f, *object) as u32)
                    .collect();
                let arr = (0..hom.n_transfs())
                    .map(|tr| hom.tr_component(tr, *object) as u32)
                    .collect();
                Ok(Outcome::Interpreted(Interp::One(InterpFun { hom, ob, arr })))
            }
            TermNode::VarArr { arity, arrow } => {
                let hom = self.hom(arity)?;
                let (x, y) = (arity.src(*arrow), arity.tgt(*arrow));
                let src = SymTable {
                    ob: (0..hom.n_functors()).map(|f| hom.fn_ob(f, x) as u32).collect(),
                    arr: (0..hom.n_transfs()).map(|t| hom.tr_component(t, x) as u32).collect(),
                };
                let tgt = SymTable {
                    ob: (0..hom.n_functors()).map(|f| hom.fn_ob(f, y) as u32).collect(),
                    arr: (0..hom.n_transfs()).map(|t| hom.tr_component(t, y) as u32).collect(),
                };
                let comp = (0..hom.n_functors())
                    .map(|f| hom.fn_arr(f, *arrow) as u32)
                    .collect();
                Ok(Outcome::Interpreted(Interp::Two(InterpNat { hom, src, tgt, comp })))
            }
            TermNode::Sym(s) => {
                let idx = self
                    .structure
                    .language
                    .sym1_index(&s.name)
                    .ok_or(TermError::UnknownSymbol { name: s.name.clone() })?;
                let hom = self.structure.homs1[idx].clone();
                let t = &self.structure.interp1[idx];
                Ok(Outcome::Interpreted(Interp::One(InterpFun {
                    hom,
                    ob: t.ob.clone(),
                    arr: t.arr.clone(),
                })))
            }
            TermNode::Sym2(s) => {
                let idx = self
                    .structure
                    .language
                    .sym2_index(&s.name)
                    .ok_or(TermError::UnknownSymbol { name: s.name.clone() })?;
                let sym = &self.structure.language.syms2()[idx];
                let hom = self.structure.homs1[sym.dom].clone();
                Ok(Outcome::Interpreted(Interp::Two(InterpNat {
                    hom,
                    src: self.structure.interp1[sym.dom].clone(),
                    tgt: self.structure.interp1[sym.cod].clone(),
                    comp: self.structure.interp2[idx].clone(),
                })))
            }
            TermNode::Power2 { inner } => {
                let inner_out = self.interpret_rec(inner)?;
                let fun = match inner_out {
                    Outcome::NotInterpretable(o) => return Ok(Outcome::NotInterpretable(o)),
                    Outcome::Interpreted(Interp::One(f)) => f,
                    Outcome::Interpreted(Interp::Two(_)) => unreachable!("power of a 1-term"),
                };
                let hom_p = self.hom(t.arity())?;
                let view = ProductView::new(t.arity(), inner.arity());
                let homx = &fun.hom;
                let n_p_fun = hom_p.n_functors();
                let n_p_tr = hom_p.n_transfs();
                let mut src = SymTable {
                    ob: vec![0; n_p_fun],
                    arr: vec![0; n_p_tr],
                };
                let mut tgt = src.clone();
                let mut comp = vec![0; n_p_fun];
                for h in 0..n_p_fun {
                    let f_idx = view.end_functor(&hom_p, homx, h, 0);
                    let g_idx = view.end_functor(&hom_p, homx, h, 1);
                    let eta = view.crossing_transf(&hom_p, homx, h, f_idx, g_idx);
                    src.ob[h] = fun.ob[f_idx];
                    tgt.ob[h] = fun.ob[g_idx];
                    comp[h] = fun.arr[eta];
                }
                for tr in 0..n_p_tr {
                    let m0 = view.end_transf(&hom_p, homx, tr, 0);
                    let m1 = view.end_transf(&hom_p, homx, tr, 1);
                    src.arr[tr] = fun.arr[m0];
                    tgt.arr[tr] = fun.arr[m1];
                }
                Ok(Outcome::Interpreted(Interp::Two(InterpNat {
                    hom: hom_p,
                    src,
                    tgt,
                    comp,
                })))
            }
            TermNode::Glue { outer, cover, arity, family } => {
                let outer_out = self.interpret_rec(outer)?;
                let outer_interp = match outer_out {
                    Outcome::NotInterpretable(o) => return Ok(Outcome::NotInterpretable(o)),
                    Outcome::Interpreted(i) => i,
                };
                let mut members = Vec::with_capacity(family.len());
                for m in family {
                    match self.interpret_rec(m)? {
                        Outcome::NotInterpretable(o) => {
                            return Ok(Outcome::NotInterpretable(o))
                        }
                        Outcome::Interpreted(i) => members.push(i),
                    }
                }
                let homx = self.hom(arity)?;
                let homy = self.hom(outer.arity())?;
                let y = cover.codomain();

                // Assemble the factor functor object by object.
                let n_fun = homx.n_functors();
                let mut phi_ob = vec![0u32; n_fun];
                let mut assembled_arr: Vec<Vec<u32>> = Vec::with_capacity(n_fun);
                for h in 0..n_fun {
                    // Object assignment from generator endpoints.
                    let mut ob_y: Vec<Option<u32>> = vec![None; y.n_objects()];
                    let mut clash: Option<ObligationKind> = None;
                    let mut put = |slot: &mut Option<u32>, v: u32, yo: usize| {
                        match slot {
                            None => *slot = Some(v),
                            Some(w) if *w == v => {}
                            Some(_) => {
                                clash.get_or_insert(ObligationKind::EndpointClash {
                                    at_functor: h,
                                    y_object: yo,
                                });
                            }
                        }
                    };
                    for (g, m) in cover.generators().iter().zip(&members) {
                        match (g, m) {
                            (Generator::Arrow(s), Interp::Two(nat)) => {
                                let c = nat.comp[h] as usize;
                                put(&mut ob_y[y.src(*s)], carrier.src(c) as u32, y.src(*s));
                                put(&mut ob_y[y.tgt(*s)], carrier.tgt(c) as u32, y.tgt(*s));
                            }
                            (Generator::Object(o), Interp::One(fun)) => {
                                put(&mut ob_y[*o], fun.ob[h], *o);
                            }
                            _ => unreachable!("family dimensions validated at construction"),
                        }
                    }
                    if let Some(kind) = clash {
                        return Ok(Outcome::NotInterpretable(Obligation {
                            at_term: t.to_string(),
                            kind,
                        }));
                    }
                    let ob_y: Vec<u32> = ob_y
                        .into_iter()
                        .map(|o| o.expect("valid cover touches every object"))
                        .collect();

                    // Arrow assignment by replaying the cover's recipes.
                    let mut arr_y = vec![0u32; y.n_arrows()];
                    for w in 0..y.n_arrows() {
                        let r = cover.try_replay(
                            w,
                            &mut |seed| match seed {
                                GenSeed::FromGenerator { idx } => match &members[idx] {
                                    Interp::Two(nat) => Ok(nat.comp[h] as usize),
                                    Interp::One(_) => unreachable!("arrow generator is 2-dim"),
                                },
                                GenSeed::IdentityAt { object } => {
                                    Ok(carrier.identity(ob_y[object] as usize) as usize)
                                }
                            },
                            &mut |yg, vg, yf, vf| {
                                carrier.compose(vg, vf).ok_or(ObligationKind::CompositionViolated {
                                    at_functor: h,
                                    y_g: yg,
                                    y_f: yf,
                                })
                            },
                            &mut |yw, v| {
                                carrier.inverse(v).ok_or(ObligationKind::MissingInverse {
                                    at_functor: h,
                                    y_arrow: yw,
                                    carrier_arrow: v,
                                })
                            },
                        );
                        match r {
                            Ok(v) => arr_y[w] = v as u32,
                            Err(kind) => {
                                return Ok(Outcome::NotInterpretable(Obligation {
                                    at_term: t.to_string(),
                                    kind,
                                }))
                            }
                        }
                    }

                    // Functor laws for the assembled assignment.
                    for o in 0..y.n_objects() {
                        if arr_y[y.identity(o) as usize] != carrier.identity(ob_y[o] as usize) {
                            return Ok(Outcome::NotInterpretable(Obligation {
                                at_term: t.to_string(),
                                kind: ObligationKind::IdentityViolated {
                                    at_functor: h,
                                    y_object: o,
                                },
                            }));
                        }
                    }
                    for w in 0..y.n_arrows() {
                        let a = arr_y[w] as usize;
                        if carrier.src(a) != ob_y[y.src(w)] as usize
                            || carrier.tgt(a) != ob_y[y.tgt(w)] as usize
                        {
                            return Ok(Outcome::NotInterpretable(Obligation {
                                at_term: t.to_string(),
                                kind: ObligationKind::EndpointClash {
                                    at_functor: h,
                                    y_object: y.src(w),
                                },
                            }));
                        }
                    }
                    for wg in 0..y.n_arrows() {
                        for wf in 0..y.n_arrows() {
                            if let Some(wc) = y.compose(wg, wf) {
                                if carrier.compose(arr_y[wg] as usize, arr_y[wf] as usize)
                                    != Some(arr_y[wc] as usize)
                                {
                                    return Ok(Outcome::NotInterpretable(Obligation {
                                        at_term: t.to_string(),
                                        kind: ObligationKind::CompositionViolated {
                                            at_functor: h,
                                            y_g: wg,
                                            y_f: wf,
                                        },
                                    }));
                                }
                            }
                        }
                    }
                    phi_ob[h] = homy
                        .find_functor(&ob_y, &arr_y)
                        .expect("assembled functor exists in the hom category")
                        as u32;
                    assembled_arr.push(arr_y);
                }

                // Assemble the transformation action.
                let n_tr = homx.n_transfs();
                let mut phi_tr = vec![0u32; n_tr];
                for tr in 0..n_tr {
                    let mut mu: Vec<Option<u32>> = vec![None; y.n_objects()];
                    let mut clash: Option<ObligationKind> = None;
                    let mut put = |slot: &mut Option<u32>, v: u32, yo: usize| match slot {
                        None => *slot = Some(v),
                        Some(w) if *w == v => {}
                        Some(_) => {
                            clash.get_or_insert(ObligationKind::ComponentClash {
                                at_transf: tr,
                                y_object: yo,
                            });
                        }
                    };
                    for (g, m) in cover.generators().iter().zip(&members) {
                        match (g, m) {
                            (Generator::Arrow(s), Interp::Two(nat)) => {
                                put(&mut mu[y.src(*s)], nat.src.arr[tr], y.src(*s));
                                put(&mut mu[y.tgt(*s)], nat.tgt.arr[tr], y.tgt(*s));
                            }
                            (Generator::Object(o), Interp::One(fun)) => {
                                put(&mut mu[*o], fun.arr[tr], *o);
                            }
                            _ => unreachable!(),
                        }
                    }
                    if let Some(kind) = clash {
                        return Ok(Outcome::NotInterpretable(Obligation {
                            at_term: t.to_string(),
                            kind,
                        }));
                    }
                    let mu: Vec<u32> = mu
                        .into_iter()
                        .map(|o| o.expect("valid cover touches every object"))
                        .collect();
                    // Naturality of mu between the assembled functors.
                    let (h0, h1) = (homx.tr_src(tr), homx.tr_tgt(tr));
                    for w in 0..y.n_arrows() {
                        let left = carrier
                            .compose(assembled_arr[h1][w] as usize, mu[y.src(w)] as usize);
                        let right = carrier
                            .compose(mu[y.tgt(w)] as usize, assembled_arr[h0][w] as usize);
                        if left != right || left.is_none() {
                            return Ok(Outcome::NotInterpretable(Obligation {
                                at_term: t.to_string(),
                                kind: ObligationKind::NaturalityBroken {
                                    at_transf: tr,
                                    y_arrow: w,
                                },
                            }));
                        }
                    }
                    phi_tr[tr] = homy
                        .find_transf(phi_ob[h0] as usize, phi_ob[h1] as usize, &mu)
                        .expect("assembled transformation exists in the hom category")
                        as u32;
                }

                // Compose the outer interpretation with the factor.
                let out = match outer_interp {
                    Interp::One(f) => Interp::One(InterpFun {
                        hom: homx,
                        ob: phi_ob.iter().map(|&h| f.ob[h as usize]).collect(),
                        arr: phi_tr.iter().map(|&t| f.arr[t as usize]).collect(),
                    }),
                    Interp::Two(nt) => Interp::Two(InterpNat {
                        hom: homx,
                        src: SymTable {
                            ob: phi_ob.iter().map(|&h| nt.src.ob[h as usize]).collect(),
                            arr: phi_tr.iter().map(|&t| nt.src.arr[t as usize]).collect(),
                        },
                        tgt: SymTable {
                            ob: phi_ob.iter().map(|&h| nt.tgt.ob[h as usize]).collect(),
                            arr: phi_tr.iter().map(|&t| nt.tgt.arr[t as usize]).collect(),
                        },
                        comp: phi_ob.iter().map(|&h| nt.comp[h as usize]).collect(),
                    }),
                };
                Ok(Outcome::Interpreted(out))
            }
        }
    }
}

/// Index bookkeeping for the isomorphism `A^(2×X) ≅ (A^X)^2`.
pub struct ProductView {
    n_obj_x: usize,
    n_arr_x: usize,
    u_arrow: usize,
    id_arrows: [usize; 2],
}

impl ProductView {
    /// `prod` must be the product of the walking arrow with `x`.
    pub fn new(prod: &Arc<FinCat>, x: &Arc<FinCat>) -> ProductView {
        let two = crate::terms::walking_arrow();
        debug_assert_eq!(prod.as_ref(), FinCat::product(&two, x).as_ref());
        ProductView {
            n_obj_x: x.n_objects(),
            n_arr_x: x.n_arrows(),
            u_arrow: two.arrow_by_label("u").expect("walking arrow"),
            id_arrows: [two.identity(0) as usize, two.identity(1) as usize],
        }
    }

    /// The functor `X -> A` obtained by restricting `h: 2×X -> A` to one
    /// end, as an index into `A^X`.
    pub fn end_functor(&self, hom_p: &HomCat, hom_x: &HomCat, h: usize, end: usize) -> usize {
        let ob: Vec<u32> = (0..self.n_obj_x)
            .map(|x| hom_p.fn_ob(h, end * self.n_obj_x + x) as u32)
            .collect();
        let arr: Vec<u32> = (0..self.n_arr_x)
            .map(|a| hom_p.fn_arr(h, self.id_arrows[end] * self.n_arr_x + a) as u32)
            .collect();
        hom_x
            .find_functor(&ob, &arr)
            .expect("restriction of a functor is a functor")
    }

    /// The crossing transformation of `h: 2×X -> A` from its end-0 to its
    /// end-1 restriction, as an index into `A^X`.
    pub fn crossing_transf(
        &self,
        hom_p: &HomCat,
        hom_x: &HomCat,
        h: usize,
        f_idx: usize,
        g_idx: usize,
    ) -> usize {
        let comps: Vec<u32> = (0..self.n_obj_x)
            .map(|x| {
                hom_p.fn_arr(h, self.u_arrow * self.n_arr_x + x_identity(hom_x, x)) as u32
            })
            .collect();
        hom_x
            .find_transf(f_idx, g_idx, &comps)
            .expect("crossing components are natural")
    }

    /// Restriction of a transformation of `A^(2×X)` to one end, as an index
    /// into `A^X`.
    pub fn end_transf(&self, hom_p: &HomCat, hom_x: &HomCat, tr: usize, end: usize) -> usize {
        let comps: Vec<u32> = (0..self.n_obj_x)
            .map(|x| hom_p.tr_component(tr, end * self.n_obj_x + x) as u32)
            .collect();
        let src = self.end_functor(hom_p, hom_x, hom_p.tr_src(tr), end);
        let tgt = self.end_functor(hom_p, hom_x, hom_p.tr_tgt(tr), end);
        hom_x
            .find_transf(src, tgt, &comps)
            .expect("restricted transformation is natural")
    }
}

fn x_identity(hom_x: &HomCat, x: usize) -> usize {
    hom_x.dom().identity(x) as usize
}

/// Checks a single judgement over a structure.
pub fn check_judgement(
    j: &Judgement,
    a: &CatStructure,
    budget: &Budget,
) -> Result<CatVerdict, EvalError> {
    let ev = Evaluator::new(a, budget);
    check_judgement_with(&ev, j)
}

/// Judgement check reusing an evaluator (and its hom-category cache).
pub fn check_judgement_with(ev: &Evaluator<'_>, j: &Judgement) -> Result<CatVerdict, EvalError> {
    match j {
        Judgement::Defined(t) => match ev.interpret(t)? {
            Outcome::Interpreted(_) => Ok(Verdict::holds()),
            Outcome::NotInterpretable(o) => Ok(Verdict::not_interpretable(CatWitness::Assembly {
                at_term: o.at_term,
                kind: o.kind,
            })),
        },
        Judgement::Equal(s, t) => {
            let si = match ev.interpret(s)? {
                Outcome::Interpreted(i) => i,
                Outcome::NotInterpretable(o) => {
                    return Ok(Verdict::not_interpretable(CatWitness::Assembly {
                        at_term: o.at_term,
                        kind: o.kind,
                    }))
                }
            };
            let ti = match ev.interpret(t)? {
                Outcome::Interpreted(i) => i,
                Outcome::NotInterpretable(o) => {
                    return Ok(Verdict::not_interpretable(CatWitness::Assembly {
                        at_term: o.at_term,
                        kind: o.kind,
                    }))
                }
            };
            Ok(compare_interps(&si, &ti))
        }
    }
}

/// Exhaustive table comparison with a first-point witness.
pub fn compare_interps(a: &Interp, b: &Interp) -> CatVerdict {
    match (a, b) {
        (Interp::One(f), Interp::One(g)) => {
            for i in 0..f.ob.len() {
                if f.ob[i] != g.ob[i] {
                    return Verdict::fails(CatWitness::AtFunctor {
                        functor: i,
                        description: f.hom.describe_functor(i),
                    });
                }
            }
            for t in 0..f.arr.len() {
                if f.arr[t] != g.arr[t] {
                    return Verdict::fails(CatWitness::AtTransf {
                        transf: t,
                        description: f.hom.describe_transf(t),
                    });
                }
            }
            Verdict::holds()
        }
        (Interp::Two(m), Interp::Two(n)) => {
            for i in 0..m.comp.len() {
                if m.comp[i] != n.comp[i] || m.src.ob[i] != n.src.ob[i] || m.tgt.ob[i] != n.tgt.ob[i]
                {
                    return Verdict::fails(CatWitness::AtFunctor {
                        functor: i,
                        description: m.hom.describe_functor(i),
                    });
                }
            }
            for t in 0..m.src.arr.len() {
                if m.src.arr[t] != n.src.arr[t] || m.tgt.arr[t] != n.tgt.arr[t] {
                    return Verdict::fails(CatWitness::AtTransf {
                        transf: t,
                        description: m.hom.describe_transf(t),
                    });
                }
            }
            Verdict::holds()
        }
        _ => Verdict::fails(CatWitness::AtFunctor {
            functor: 0,
            description: "terms have different dimensions".into(),
        }),
    }
}

/// Full model check: the conjunction over the theory's judgements.
#[derive(Debug, Clone, Serialize)]
pub struct ModelReport {
    pub holds: bool,
    /// Verdict per judgement, in theory order.
    pub verdicts: Vec<CatVerdict>,
}

pub fn is_model(a: &CatStructure, theory: &Theory, budget: &Budget) -> Result<ModelReport, EvalError> {
    let ev = Evaluator::new(a, budget);
    let mut verdicts = Vec::with_capacity(theory.judgements.len());
    let mut holds = true;
    for j in &theory.judgements {
        let v = check_judgement_with(&ev, j)?;
        holds &= v.is_holds();
        verdicts.push(v);
    }
    Ok(ModelReport { holds, verdicts })
}

/// Structure-morphism check: the action squares commute for every symbol.
#[derive(Debug, Clone, Serialize)]
pub struct MorphismReport {
    pub is_morphism: bool,
    /// First symbol whose square failed, if any.
    pub failing_symbol: Option<String>,
}

pub fn check_structure_morphism(
    h: &FinFunctor,
    a: &CatStructure,
    b: &CatStructure,
    budget: &Budget,
) -> Result<MorphismReport, EvalError> {
    if a.language != b.language {
        return Err(CatError::Malformed("structures over different languages".into()).into());
    }
    if h.dom() != a.carrier() || h.cod() != b.carrier() {
        return Err(CatError::Malformed("functor endpoints do not match carriers".into()).into());
    }
    let ev_b = Evaluator::new(b, budget);
    for (idx, sym) in a.language.syms1().iter().enumerate() {
        let hom_a = &a.homs1[idx];
        let hom_b = ev_b.hom(&sym.arity)?;
        let fa = &a.interp1[idx];
        let fb = &b.interp1[idx];
        let (map_fun, map_tr) = pushforward(hom_a, &hom_b, h);
        for i in 0..hom_a.n_functors() {
            if fb.ob[map_fun[i]] != h.ob(fa.ob[i] as usize) as u32 {
                return Ok(MorphismReport {
                    is_morphism: false,
                    failing_symbol: Some(sym.name.clone()),
                });
            }
        }
        for t in 0..hom_a.n_transfs() {
            if fb.arr[map_tr[t]] != h.arr(fa.arr[t] as usize) as u32 {
                return Ok(MorphismReport {
                    is_morphism: false,
                    failing_symbol: Some(sym.name.clone()),
                });
            }
        }
    }
    for (idx, sym) in a.language.syms2().iter().enumerate() {
        let hom_a = &a.homs1[sym.dom];
        let hom_b = ev_b.hom(&a.language.syms1()[sym.dom].arity)?;
        let (map_fun, _) = pushforward(hom_a, &hom_b, h);
        let ca = &a.interp2[idx];
        let cb = &b.interp2[idx];
        for i in 0..hom_a.n_functors() {
            if cb[map_fun[i]] != h.arr(ca[i] as usize) as u32 {
                return Ok(MorphismReport {
                    is_morphism: false,
                    failing_symbol: Some(sym.name.clone()),
                });
            }
        }
    }
    Ok(MorphismReport { is_morphism: true, failing_symbol: None })
}

/// The action of postcomposition `h ∘ -` on hom categories, as index maps.
pub fn pushforward(
    hom_a: &HomCat,
    hom_b: &HomCat,
    h: &FinFunctor,
) -> (Vec<usize>, Vec<usize>) {
    let map_fun: Vec<usize> = (0..hom_a.n_functors())
        .map(|i| {
            let ob: Vec<u32> = hom_a
                .functor_ob_slice(i)
                .iter()
                .map(|&o| h.ob(o as usize) as u32)
                .collect();
            let arr: Vec<u32> = hom_a
                .functor_arr_slice(i)
                .iter()
                .map(|&a| h.arr(a as usize) as u32)
                .collect();
            hom_b
                .find_functor(&ob, &arr)
                .expect("postcomposition image is a functor")
        })
        .collect();
    let map_tr: Vec<usize> = (0..hom_a.n_transfs())
        .map(|t| {
            let comps: Vec<u32> = hom_a
                .tr_components(t)
                .iter()
                .map(|&c| h.arr(c as usize) as u32)
                .collect();
            hom_b
                .find_transf(
                    map_fun[hom_a.tr_src(t)],
                    map_fun[hom_a.tr_tgt(t)],
                    &comps,
                )
                .expect("postcomposition image is natural")
        })
        .collect();
    (map_fun, map_tr)
}

/// Independent semantics for powers of 2-terms: computes the composite
/// through `A^(2×X) ≅ (A^X)^2` directly, for validating the five
/// elimination cases.
pub fn direct_power2_oracle(
    tau: &Term,
    case: Power2Case,
    a: &CatStructure,
    budget: &Budget,
) -> Result<Outcome, EvalError> {
    if tau.dim() != Dim::Two {
        return Err(TermError::DimensionMismatch {
            context: "the oracle applies to 2-terms".into(),
        }
        .into());
    }
    let ev = Evaluator::new(a, budget);
    let nat = match ev.interpret(tau)? {
        Outcome::NotInterpretable(o) => return Ok(Outcome::NotInterpretable(o)),
        Outcome::Interpreted(Interp::Two(n)) => n,
        Outcome::Interpreted(Interp::One(_)) => unreachable!(),
    };
    let x = tau.arity().clone();
    let prod = FinCat::product(&crate::terms::walking_arrow(), &x);
    let hom_p = ev.hom(&prod)?;
    let homx = &nat.hom;
    let view = ProductView::new(&prod, &x);
    let carrier = a.carrier();

    let n_fun = hom_p.n_functors();
    let n_tr = hom_p.n_transfs();
    let mut src = SymTable { ob: vec![0; n_fun], arr: vec![0; n_tr] };
    let mut tgt = src.clone();
    let mut comp = vec![0; n_fun];
    for h in 0..n_fun {
        let f = view.end_functor(&hom_p, homx, h, 0);
        let g = view.end_functor(&hom_p, homx, h, 1);
        let eta = view.crossing_transf(&hom_p, homx, h, f, g);
        match case {
            Power2Case::DomainPower => {
                src.ob[h] = nat.src.ob[f];
                tgt.ob[h] = nat.src.ob[g];
                comp[h] = nat.src.arr[eta];
            }
            Power2Case::CodomainPower => {
                src.ob[h] = nat.tgt.ob[f];
                tgt.ob[h] = nat.tgt.ob[g];
                comp[h] = nat.tgt.arr[eta];
            }
            Power2Case::RestrictAt0 => {
                src.ob[h] = nat.src.ob[f];
                tgt.ob[h] = nat.tgt.ob[f];
                comp[h] = nat.comp[f];
            }
            Power2Case::RestrictAt1 => {
                src.ob[h] = nat.src.ob[g];
                tgt.ob[h] = nat.tgt.ob[g];
                comp[h] = nat.comp[g];
            }
            Power2Case::Diagonal => {
                src.ob[h] = nat.src.ob[f];
                tgt.ob[h] = nat.tgt.ob[g];
                comp[h] = carrier
                    .compose(nat.comp[g] as usize, nat.src.arr[eta] as usize)
                    .expect("naturality square composes") as u32;
            }
        }
    }
    for tr in 0..n_tr {
        let m0 = view.end_transf(&hom_p, homx, tr, 0);
        let m1 = view.end_transf(&hom_p, homx, tr, 1);
        match case {
            Power2Case::DomainPower => {
                src.arr[tr] = nat.src.arr[m0];
                tgt.arr[tr] = nat.src.arr[m1];
            }
            Power2Case::CodomainPower => {
                src.arr[tr] = nat.tgt.arr[m0];
                tgt.arr[tr] = nat.tgt.arr[m1];
            }
            Power2Case::RestrictAt0 => {
                src.arr[tr] = nat.src.arr[m0];
                tgt.arr[tr] = nat.tgt.arr[m0];
            }
            Power2Case::RestrictAt1 => {
                src.arr[tr] = nat.src.arr[m1];
                tgt.arr[tr] = nat.tgt.arr[m1];
            }
            Power2Case::Diagonal => {
                src.arr[tr] = nat.src.arr[m0];
                tgt.arr[tr] = nat.tgt.arr[m1];
            }
        }
    }
    Ok(Outcome::Interpreted(Interp::Two(InterpNat { hom: hom_p, src, tgt, comp })))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::terms::Judgement;
    use crate::verdict::Status;

    fn empty_lang() -> Arc<Language> {
        Arc::new(Language::empty("empty"))
    }

    fn structure_on(c: Arc<FinCat>) -> CatStructure {
        CatStructure::empty_lang(format!("S_{c}"), empty_lang(), c)
    }

    fn groupoid_term() -> Term {
        let two = FinCat::two();
        Term::invert2(Term::var_arr(&two, 2).unwrap()).unwrap()
    }

    fn discreteness_term() -> Term {
        // glue(arr(id); One by {Arrow(id)}; id -> arr(u)) over arity 2.
        let one = FinCat::one();
        let two = FinCat::two();
        let cover = crate::fincat::GeneratingFamily::validate(
            one.clone(),
            vec![Generator::Arrow(one.identity(0) as usize)],
        )
        .unwrap();
        let outer = Term::var_arr(&one, one.identity(0) as usize).unwrap();
        Term::glue(outer, cover, vec![Term::var_arr(&two, 2).unwrap()]).unwrap()
    }

    #[test]
    fn inverse_term_detects_groupoids() {
        let budget = Budget::default();
        let term = groupoid_term();
        // The walking iso is a groupoid: interpretable.
        let s = structure_on(FinCat::iso());
        let ev = Evaluator::new(&s, &budget);
        assert!(ev.interpret(&term).unwrap().is_interpretable());
        // The walking arrow is not.
        let s = structure_on(FinCat::two());
        let ev = Evaluator::new(&s, &budget);
        match ev.interpret(&term).unwrap() {
            Outcome::NotInterpretable(o) => {
                assert!(matches!(o.kind, ObligationKind::MissingInverse { .. }))
            }
            Outcome::Interpreted(_) => panic!("walking arrow is not a groupoid"),
        }
    }

    #[test]
    fn discreteness_term_detects_discreteness() {
        let budget = Budget::default();
        let term = discreteness_term();
        let s = structure_on(FinCat::discrete(2));
        let ev = Evaluator::new(&s, &budget);
        assert!(ev.interpret(&term).unwrap().is_interpretable());
        let s = structure_on(FinCat::two());
        let ev = Evaluator::new(&s, &budget);
        match ev.interpret(&term).unwrap() {
            Outcome::NotInterpretable(o) => {
                // u is not an endomorphism, so its endpoints clash at the
                // single object; a non-identity endo would instead trip the
                // identity law.
                assert!(matches!(
                    o.kind,
                    ObligationKind::EndpointClash { .. } | ObligationKind::IdentityViolated { .. }
                ))
            }
            Outcome::Interpreted(_) => panic!("walking arrow is not discrete"),
        }
        // A non-identity endomorphism fails the identity law instead.
        let loop_cat = crate::corpus::generate(
            &crate::corpus::CorpusBounds::new(1, 2),
            &Budget::unlimited(),
        )
        .unwrap()
        .into_iter()
        .find(|c| c.n_arrows() == 2 && !c.is_discrete())
        .expect("two-element monoid exists");
        let s = structure_on(loop_cat);
        let ev = Evaluator::new(&s, &budget);
        match ev.interpret(&term).unwrap() {
            Outcome::NotInterpretable(o) => {
                assert!(matches!(o.kind, ObligationKind::IdentityViolated { .. }))
            }
            Outcome::Interpreted(_) => panic!("monoid with a loop is not discrete"),
        }
    }

    #[test]
    fn compose_with_identity_is_identity_law() {
        // compose2(sigma, identity2(endpoint(sigma, 0))) has the same
        // interpretation as sigma, on both probes tried.
        let two = FinCat::two();
        let sigma = Term::var_arr(&two, 2).unwrap();
        let lhs = Term::compose2(
            sigma.clone(),
            Term::identity2(Term::endpoint(sigma.clone(), 0).unwrap()).unwrap(),
        )
        .unwrap();
        let budget = Budget::default();
        for probe in [FinCat::two(), FinCat::iso(), FinCat::three()] {
            let s = structure_on(probe);
            let ev = Evaluator::new(&s, &budget);
            let a = ev.interpret(&lhs).unwrap();
            let b = ev.interpret(&sigma).unwrap();
            assert!(a.is_interpretable() && b.is_interpretable());
            assert!(
                compare_interps(a.interp().unwrap(), b.interp().unwrap()).is_holds()
            );
        }
    }

    #[test]
    fn endpoint_coherence() {
        let two = FinCat::two();
        let sigma = Term::var_arr(&two, 2).unwrap();
        let budget = Budget::default();
        let s = structure_on(FinCat::three());
        let ev = Evaluator::new(&s, &budget);
        let nat = match ev.interpret(&sigma).unwrap() {
            Outcome::Interpreted(Interp::Two(n)) => n,
            _ => panic!(),
        };
        let e0 = match ev.interpret(&Term::endpoint(sigma.clone(), 0).unwrap()).unwrap() {
            Outcome::Interpreted(Interp::One(f)) => f,
            _ => panic!(),
        };
        let e1 = match ev.interpret(&Term::endpoint(sigma, 1).unwrap()).unwrap() {
            Outcome::Interpreted(Interp::One(f)) => f,
            _ => panic!(),
        };
        assert_eq!(e0.ob, nat.src.ob);
        assert_eq!(e0.arr, nat.src.arr);
        assert_eq!(e1.ob, nat.tgt.ob);
        assert_eq!(e1.arr, nat.tgt.arr);
    }

    #[test]
    fn equation_reflexivity_holds() {
        let two = FinCat::two();
        let t = Term::var_obj(&two, 0).unwrap();
        let j = Judgement::Equal(t.clone(), t);
        let s = structure_on(FinCat::three());
        let v = check_judgement(&j, &s, &Budget::default()).unwrap();
        assert_eq!(v.status, Status::Holds);
    }

    #[test]
    fn judgement_on_empty_theory_always_models() {
        let theory =
            Theory::new("trivial", empty_lang(), vec![]).unwrap();
        let s = structure_on(FinCat::two());
        let report = is_model(&s, &theory, &Budget::default()).unwrap();
        assert!(report.holds);
    }

    #[test]
    fn assembly_uniqueness_on_probe_corpus() {
        // When rule-4 assembly succeeds, no second distinct functor agrees
        // with the family on the generators.
        let budget = Budget::default();
        let term = groupoid_term();
        let (outer_cover, family_arrow) = match term.node() {
            TermNode::Glue { cover, .. } => {
                (cover.clone(), cover.generators()[0])
            }
            _ => panic!(),
        };
        let Generator::Arrow(gen_arrow) = family_arrow else { panic!() };
        for probe in [FinCat::iso(), FinCat::discrete(2), FinCat::one()] {
            let s = structure_on(probe.clone());
            let ev = Evaluator::new(&s, &budget);
            let homx = ev.hom(&FinCat::two()).unwrap();
            let homy = ev.hom(outer_cover.codomain()).unwrap();
            let sigma = Term::var_arr(&FinCat::two(), 2).unwrap();
            let nat = match ev.interpret(&sigma).unwrap() {
                Outcome::Interpreted(Interp::Two(n)) => n,
                _ => panic!(),
            };
            for h in 0..homx.n_functors() {
                let matching: Vec<usize> = (0..homy.n_functors())
                    .filter(|&cand| homy.fn_arr(cand, gen_arrow) == nat.comp[h] as usize)
                    .collect();
                assert!(matching.len() <= 1, "assembly must be unique");
            }
        }
    }

    #[test]
    fn structure_morphism_identity_and_collapse() {
        let budget = Budget::default();
        let lang = Arc::new(
            Language::new(
                "unary",
                vec![crate::terms::FnSym { name: "m".into(), arity: FinCat::one() }],
                vec![],
            )
            .unwrap(),
        );
        // Interpret m as the identity on each structure.
        let make = |carrier: Arc<FinCat>| {
            let hom = HomCat::build(FinCat::one(), carrier.clone(), &budget).unwrap();
            let ob: Vec<u32> = (0..hom.n_functors()).map(|f| hom.fn_ob(f, 0) as u32).collect();
            let arr: Vec<u32> =
                (0..hom.n_transfs()).map(|t| hom.tr_component(t, 0) as u32).collect();
            CatStructure::new(
                format!("M_{carrier}"),
                lang.clone(),
                carrier,
                vec![SymTable { ob, arr }],
                vec![],
                &budget,
            )
            .unwrap()
        };
        let a = make(FinCat::two());
        let b = make(FinCat::one());
        let id = FinFunctor::identity(FinCat::two());
        assert!(check_structure_morphism(&id, &a, &a, &budget).unwrap().is_morphism);
        let collapse = FinFunctor::new(
            FinCat::two(),
            FinCat::one(),
            vec![0, 0],
            vec![0, 0, 0],
        )
        .unwrap();
        assert!(check_structure_morphism(&collapse, &a, &b, &budget)
            .unwrap()
            .is_morphism);
    }
}
