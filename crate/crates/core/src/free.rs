//! Bounded-depth free structures from probe equivalence.
//!
//! Semantic term equivalence quantifies over all structures, which is not
//! finitely decidable, so it is approximated here by agreement over a
//! finite probe set: two terms are probe-equivalent when their
//! interpretability status and interpretation tables agree on every probe.
//! The approximation is sound for inequivalence and only evidence for
//! equivalence; every consumer of these quotients carries that caveat.
//!
//! The free structure on a shape is assembled from the equivalence classes
//! of everywhere-probe-interpretable terms: objects are 1-term classes,
//! arrows are 2-term classes, composition and identities come from the
//! derived constructors, the unit sends the shape into variable classes,
//! and symbols act by substitution into representatives. An executable
//! universal-property check validates the construction against structures
//! outside the probe set.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::{canonical_generators, FinCat, FinFunctor, GeneratingFamily, Generator, HomCat};
use crate::interp::{
    check_structure_morphism, CatStructure, EvalError, Evaluator, Interp, Outcome, SymTable,
};
use crate::terms::{Dim, Language, Term};

#[derive(Debug, Clone, Error)]
pub enum FreeError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("term construction failed: {0}")]
    Term(#[from] crate::terms::TermError),
    #[error("not closed under structure: {context} escapes the enumerated classes")]
    NonClosedUnderStructure { context: String },
    #[error("assembled free structure is invalid: {0} (probe set too coarse?)")]
    StructureInvalid(String),
}

/// A finite, nonempty, uniform-language probe set.
#[derive(Debug, Clone)]
pub struct ProbeSet {
    structures: Vec<CatStructure>,
}

impl ProbeSet {
    pub fn new(structures: Vec<CatStructure>) -> ProbeSet {
        assert!(!structures.is_empty(), "probe sets are nonempty");
        let lang = structures[0].language().clone();
        assert!(
            structures.iter().all(|s| s.language() == &lang),
            "probe sets are uniform over one language"
        );
        ProbeSet { structures }
    }

    /// The default probe set for a language: every structure on every
    /// carrier with at most two objects and four arrows, capped.
    pub fn default_for(language: &Arc<Language>, budget: &Budget) -> Result<ProbeSet, EvalError> {
        let carriers = crate::corpus::generate(
            &crate::corpus::CorpusBounds::new(2, 4),
            budget,
        )
        .map_err(crate::fincat::CatError::from)?;
        let mut structures = Vec::new();
        for c in carriers {
            if c.n_objects() == 0 {
                continue; // the empty carrier distinguishes nothing
            }
            let batch = crate::variety::enumerate_structures(language, &c, budget, 8)?;
            structures.extend(batch);
            if structures.len() >= 96 {
                break;
            }
        }
        Ok(ProbeSet::new(structures))
    }

    pub fn structures(&self) -> &[CatStructure] {
        &self.structures
    }

    pub fn len(&self) -> usize {
        self.structures.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// The evaluation signature of a term over a probe set: interpretability
/// status and full tables per probe. Signature equality is exactly probe
/// equivalence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<Option<Vec<u32>>>);

/// Shared evaluation context over one probe set, with a signature cache.
pub struct ProbeContext<'a> {
    evals: Vec<Evaluator<'a>>,
    cache: RefCell<HashMap<Term, Arc<Signature>>>,
}

impl<'a> ProbeContext<'a> {
    pub fn new(probes: &'a ProbeSet, budget: &'a Budget) -> ProbeContext<'a> {
        ProbeContext {
            evals: probes
                .structures()
                .iter()
                .map(|s| Evaluator::new(s, budget))
                .collect(),
            cache: RefCell::new(HashMap::new()),
        }
    }

    /// Evaluation signature of a term over every probe.
    pub fn signature(&self, t: &Term) -> Result<Arc<Signature>, EvalError> {
        if let Some(s) = self.cache.borrow().get(t) {
            return Ok(s.clone());
        }
        let mut parts = Vec::with_capacity(self.evals.len());
        for ev in &self.evals {
            let entry = match ev.interpret(t)? {
                Outcome::NotInterpretable(_) => None,
                Outcome::Interpreted(i) => Some(flatten(&i)),
            };
            parts.push(entry);
        }
        let sig = Arc::new(Signature(parts));
        self.cache.borrow_mut().insert(t.clone(), sig.clone());
        Ok(sig)
    }

    /// Whether the term interprets on every probe.
    pub fn everywhere_interpretable(&self, t: &Term) -> Result<bool, EvalError> {
        Ok(self.signature(t)?.0.iter().all(|p| p.is_some()))
    }
}

fn flatten(i: &Interp) -> Vec<u32> {
    match i {
        Interp::One(f) => {
            let mut v = vec![1u32];
            v.extend(&f.ob);
            v.extend(&f.arr);
            v
        }
        Interp::Two(n) => {
            let mut v = vec![2u32];
            v.extend(&n.src.ob);
            v.extend(&n.src.arr);
            v.extend(&n.tgt.ob);
            v.extend(&n.tgt.arr);
            v.extend(&n.comp);
            v
        }
    }
}

/// Probe equivalence: interpretability statuses and interpretations agree
/// on every probe. Sound for inequivalence; evidence only for equivalence.
pub fn probe_equivalent(
    s: &Term,
    t: &Term,
    probes: &ProbeSet,
    budget: &Budget,
) -> Result<bool, EvalError> {
    if s.arity() != t.arity() || s.dim() != t.dim() {
        return Ok(false);
    }
    let ctx = ProbeContext::new(probes, budget);
    Ok(ctx.signature(s)? == ctx.signature(t)?)
}

/// Enumerates the well-formed terms of both dimensions over a shape, by
/// construction layers, deduplicated structurally, in a deterministic
/// order.
///
/// Layer 1 holds the rule-1 leaves (and symbols whose arity is the shape);
/// each further layer closes under 2-cell composition, inversion,
/// identities, endpoints, and symbol application over canonical generating
/// families.
pub fn enumerate_terms(
    language: &Arc<Language>,
    shape: &Arc<FinCat>,
    depth: usize,
    budget: &Budget,
) -> Result<Vec<Term>, FreeError> {
    let mut all: Vec<Term> = Vec::new();
    let mut seen: std::collections::HashSet<Term> = std::collections::HashSet::new();
    let push = |t: Term, all: &mut Vec<Term>, seen: &mut std::collections::HashSet<Term>| -> Result<(), FreeError> {
        if seen.insert(t.clone()) {
            all.push(t);
            if all.len() > budget.max_terms {
                return Err(BudgetExceeded::new("term enumeration", budget.max_terms).into());
            }
        }
        Ok(())
    };

    if depth == 0 {
        return Ok(all);
    }
    for o in 0..shape.n_objects() {
        push(Term::var_obj(shape, o)?, &mut all, &mut seen)?;
    }
    for a in 0..shape.n_arrows() {
        push(Term::var_arr(shape, a)?, &mut all, &mut seen)?;
    }
    for s in language.syms1() {
        if &s.arity == shape {
            push(Term::sym(language, &s.name)?, &mut all, &mut seen)?;
        }
    }
    for s in language.syms2() {
        if &s.arity == shape {
            push(Term::sym2(language, &s.name)?, &mut all, &mut seen)?;
        }
    }

    for _layer in 2..=depth {
        let snapshot = all.clone();
        let ones: Vec<Term> = snapshot.iter().filter(|t| t.dim() == Dim::One).cloned().collect();
        let twos: Vec<Term> = snapshot.iter().filter(|t| t.dim() == Dim::Two).cloned().collect();
        for t in &ones {
            push(Term::identity2(t.clone())?, &mut all, &mut seen)?;
        }
        for s in &twos {
            push(Term::invert2(s.clone())?, &mut all, &mut seen)?;
            push(Term::endpoint(s.clone(), 0)?, &mut all, &mut seen)?;
            push(Term::endpoint(s.clone(), 1)?, &mut all, &mut seen)?;
        }
        for s in &twos {
            for t in &twos {
                push(Term::compose2(s.clone(), t.clone())?, &mut all, &mut seen)?;
            }
        }
        // Symbol application over canonical generating families.
        for sym in language.syms1() {
            apply_symbol(
                Term::sym(language, &sym.name)?,
                &sym.arity,
                shape,
                &ones,
                &twos,
                &mut |t| push(t, &mut all, &mut seen),
            )?;
        }
        for sym in language.syms2() {
            apply_symbol(
                Term::sym2(language, &sym.name)?,
                &sym.arity,
                shape,
                &ones,
                &twos,
                &mut |t| push(t, &mut all, &mut seen),
            )?;
        }
    }
    Ok(all)
}

/// Emits every gluing of the outer term over the canonical cover of its
/// arity, with family members drawn from the given pools.
fn apply_symbol(
    outer: Term,
    arity: &Arc<FinCat>,
    shape: &Arc<FinCat>,
    ones: &[Term],
    twos: &[Term],
    emit: &mut impl FnMut(Term) -> Result<(), FreeError>,
) -> Result<(), FreeError> {
    let gens = canonical_generators(arity);
    let cover = GeneratingFamily::validate(arity.clone(), gens.clone())
        .expect("canonical generators are valid");
    // Pools per slot.
    let pools: Vec<&[Term]> = gens
        .iter()
        .map(|g| match g {
            Generator::Arrow(_) => twos,
            Generator::Object(_) => ones,
        })
        .collect();
    if pools.iter().any(|p| p.is_empty()) && !pools.is_empty() {
        return Ok(());
    }
    let mut idx = vec![0usize; pools.len()];
    loop {
        let family: Vec<Term> = idx.iter().zip(&pools).map(|(&i, p)| p[i].clone()).collect();
        let term = Term::glue_with_arity(outer.clone(), cover.clone(), family, shape.clone())?;
        emit(term)?;
        // Odometer.
        let mut i = idx.len();
        let mut wrapped = true;
        while i > 0 {
            i -= 1;
            if idx[i] + 1 < pools[i].len() {
                idx[i] += 1;
                for c in idx.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                wrapped = false;
                break;
            }
            idx[i] = 0;
        }
        if wrapped {
            return Ok(());
        }
    }
}

/// A bounded-depth free structure: carrier of term classes, unit, and the
/// parameters it was built with.
#[derive(Debug, Clone)]
pub struct FreeStructure {
    pub structure: CatStructure,
    pub shape: Arc<FinCat>,
    pub unit: FinFunctor,
    /// Representative 1-term per object class (enumeration-least).
    pub object_reps: Vec<Term>,
    /// Representative 2-term per arrow class.
    pub arrow_reps: Vec<Term>,
    pub depth: usize,
    pub probe_count: usize,
}

/// Builds the bounded free structure on a shape: enumerate, keep the
/// everywhere-probe-interpretable terms, quotient by probe equivalence,
/// close under the categorical operations, and install the symbol actions.
pub fn build_free(
    language: &Arc<Language>,
    shape: &Arc<FinCat>,
    depth: usize,
    probes: &ProbeSet,
    budget: &Budget,
) -> Result<FreeStructure, FreeError> {
    let ctx = ProbeContext::new(probes, budget);
    let terms = enumerate_terms(language, shape, depth, budget)?;

    // Quotient by signature.
    let mut class_of: HashMap<Arc<Signature>, usize> = HashMap::new();
    let mut reps: Vec<Term> = Vec::new();
    let mut sig_of: Vec<Arc<Signature>> = Vec::new();
    let intern = |t: &Term,
                      ctx: &ProbeContext<'_>,
                      class_of: &mut HashMap<Arc<Signature>, usize>,
                      reps: &mut Vec<Term>,
                      sig_of: &mut Vec<Arc<Signature>>|
     -> Result<Option<usize>, FreeError> {
        if !ctx.everywhere_interpretable(t)? {
            return Ok(None);
        }
        let sig = ctx.signature(t)?;
        if let Some(&c) = class_of.get(&sig) {
            return Ok(Some(c));
        }
        let c = reps.len();
        if c > budget.max_terms {
            return Err(BudgetExceeded::new("free-structure classes", budget.max_terms).into());
        }
        class_of.insert(sig.clone(), c);
        reps.push(t.clone());
        sig_of.push(sig);
        Ok(Some(c))
    };

    for t in &terms {
        intern(t, &ctx, &mut class_of, &mut reps, &mut sig_of)?;
    }

    // Categorical closure: endpoints, identities, composites.
    let mut processed = 0usize;
    while processed < reps.len() {
        let upto = reps.len();
        for i in processed..upto {
            let rep = reps[i].clone();
            if rep.dim() == Dim::Two {
                for end in 0..2 {
                    let e = Term::endpoint(rep.clone(), end)?;
                    intern(&e, &ctx, &mut class_of, &mut reps, &mut sig_of)?
                        .expect("endpoints of interpretable terms interpret");
                }
            } else {
                let idt = Term::identity2(rep.clone())?;
                intern(&idt, &ctx, &mut class_of, &mut reps, &mut sig_of)?
                    .expect("identities of interpretable terms interpret");
            }
        }
        // Composites among all current 2-classes whose endpoints match.
        let twos: Vec<usize> = (0..reps.len()).filter(|&i| reps[i].dim() == Dim::Two).collect();
        let mut endpoint_class = HashMap::new();
        for &i in &twos {
            let d = class_of[&ctx.signature(&Term::endpoint(reps[i].clone(), 0)?)?];
            let c = class_of[&ctx.signature(&Term::endpoint(reps[i].clone(), 1)?)?];
            endpoint_class.insert(i, (d, c));
        }
        for &g in &twos {
            for &f in &twos {
                if endpoint_class[&f].1 == endpoint_class[&g].0 {
                    let comp = Term::compose2(reps[g].clone(), reps[f].clone())?;
                    intern(&comp, &ctx, &mut class_of, &mut reps, &mut sig_of)?
                        .expect("composites of matching classes interpret");
                }
            }
        }
        processed = upto;
    }

    // Partition classes.
    let object_classes: Vec<usize> = (0..reps.len()).filter(|&i| reps[i].dim() == Dim::One).collect();
    let arrow_classes: Vec<usize> = (0..reps.len()).filter(|&i| reps[i].dim() == Dim::Two).collect();
    let mut object_index = HashMap::new();
    for (k, &i) in object_classes.iter().enumerate() {
        object_index.insert(i, k);
    }
    let mut arrow_index = HashMap::new();
    for (k, &i) in arrow_classes.iter().enumerate() {
        arrow_index.insert(i, k);
    }

    let class_for = |t: &Term, ctx: &ProbeContext<'_>| -> Result<Option<usize>, FreeError> {
        Ok(class_of.get(&ctx.signature(t)?).copied())
    };

    // Carrier tables.
    let mut arrow_src = Vec::with_capacity(arrow_classes.len());
    let mut arrow_tgt = Vec::with_capacity(arrow_classes.len());
    for &i in &arrow_classes {
        let d = class_for(&Term::endpoint(reps[i].clone(), 0)?, &ctx)?.unwrap();
        let c = class_for(&Term::endpoint(reps[i].clone(), 1)?, &ctx)?.unwrap();
        arrow_src.push(object_index[&d]);
        arrow_tgt.push(object_index[&c]);
    }
    let mut identities = Vec::with_capacity(object_classes.len());
    for &i in &object_classes {
        let idc = class_for(&Term::identity2(reps[i].clone())?, &ctx)?.unwrap();
        identities.push(arrow_index[&idc]);
    }
    let mut comp_table: HashMap<(usize, usize), usize> = HashMap::new();
    for (gi, &g) in arrow_classes.iter().enumerate() {
        for (fi, &f) in arrow_classes.iter().enumerate() {
            if arrow_src[gi] == arrow_tgt[fi] {
                let c = class_for(&Term::compose2(reps[g].clone(), reps[f].clone())?, &ctx)?
                    .expect("closure added all composites");
                comp_table.insert((gi, fi), arrow_index[&c]);
            }
        }
    }
    let carrier = FinCat::from_table(
        (0..object_classes.len()).map(|k| format!("[{}]", reps[object_classes[k]])).collect(),
        (0..arrow_classes.len())
            .map(|k| crate::fincat::Arrow {
                label: format!("[{}]", reps[arrow_classes[k]]),
                src: arrow_src[k],
                tgt: arrow_tgt[k],
            })
            .collect(),
        identities,
        |g, f| comp_table.get(&(g, f)).copied(),
    )
    .map_err(|e| FreeError::StructureInvalid(e.to_string()))?;

    // Unit functor.
    let unit_ob: Vec<u32> = (0..shape.n_objects())
        .map(|o| {
            class_for(&Term::var_obj(shape, o).unwrap(), &ctx)
                .map(|c| object_index[&c.expect("variables interpret everywhere")] as u32)
        })
        .collect::<Result<_, _>>()?;
    let unit_arr: Vec<u32> = (0..shape.n_arrows())
        .map(|a| {
            class_for(&Term::var_arr(shape, a).unwrap(), &ctx)
                .map(|c| arrow_index[&c.expect("variables interpret everywhere")] as u32)
        })
        .collect::<Result<_, _>>()?;
    let unit = FinFunctor::new(shape.clone(), carrier.clone(), unit_ob, unit_arr)
        .map_err(|e| FreeError::StructureInvalid(format!("unit is not a functor: {e}")))?;

    // Symbol actions by substitution into representatives.
    let object_reps: Vec<Term> = object_classes.iter().map(|&i| reps[i].clone()).collect();
    let arrow_reps: Vec<Term> = arrow_classes.iter().map(|&i| reps[i].clone()).collect();
    let mut interp1 = Vec::new();
    let mut homs = Vec::new();
    for sym in language.syms1() {
        let hom = HomCat::build(sym.arity.clone(), carrier.clone(), budget)
            .map_err(EvalError::from)?;
        let outer = Term::sym(language, &sym.name)?;
        let (ob, arr) = symbol_action(
            &outer,
            &sym.arity,
            &hom,
            shape,
            &object_reps,
            &arrow_reps,
            &ctx,
            &class_of,
            &object_index,
            &arrow_index,
            &reps,
        )?;
        interp1.push(SymTable { ob, arr });
        homs.push(hom);
    }
    let mut interp2 = Vec::new();
    for sym in language.syms2() {
        let hom = &homs[sym.dom];
        let outer = Term::sym2(language, &sym.name)?;
        let arity = &language.syms1()[sym.dom].arity;
        let mut comps = Vec::with_capacity(hom.n_functors());
        for h in 0..hom.n_functors() {
            let term = substitution_term(&outer, arity, hom, h, &object_reps, &arrow_reps)?;
            let cls = class_for(&term, &ctx)?.ok_or_else(|| FreeError::NonClosedUnderStructure {
                context: format!("2-symbol {} at functor {h}", sym.name),
            })?;
            let ai = *arrow_index
                .get(&cls)
                .ok_or_else(|| FreeError::NonClosedUnderStructure {
                    context: format!("2-symbol {} lands outside arrow classes", sym.name),
                })?;
            comps.push(ai as u32);
        }
        interp2.push(comps);
    }
    let structure = CatStructure::new(
        format!("F({shape})"),
        language.clone(),
        carrier,
        interp1,
        interp2,
        budget,
    )
    .map_err(|e| FreeError::StructureInvalid(e.to_string()))?;

    Ok(FreeStructure {
        structure,
        shape: shape.clone(),
        unit,
        object_reps,
        arrow_reps,
        depth,
        probe_count: probes.len(),
    })
}

/// The action of a symbol on an object of `carrier^Y` (a functor from the
/// symbol's arity into the class category) and on its arrows, as class
/// tables.
#[allow(clippy::too_many_arguments)]
fn symbol_action(
    outer: &Term,
    arity: &Arc<FinCat>,
    hom: &HomCat,
    _shape: &Arc<FinCat>,
    object_reps: &[Term],
    arrow_reps: &[Term],
    ctx: &ProbeContext<'_>,
    class_of: &HashMap<Arc<Signature>, usize>,
    object_index: &HashMap<usize, usize>,
    arrow_index: &HashMap<usize, usize>,
    _reps: &[Term],
) -> Result<(Vec<u32>, Vec<u32>), FreeError> {
    let mut ob = Vec::with_capacity(hom.n_functors());
    for h in 0..hom.n_functors() {
        let term = substitution_term(outer, arity, hom, h, object_reps, arrow_reps)?;
        let sig = ctx.signature(&term)?;
        let cls = class_of
            .get(&sig)
            .copied()
            .ok_or_else(|| FreeError::NonClosedUnderStructure {
                context: format!("symbol application at functor {h}"),
            })?;
        let oi = *object_index
            .get(&cls)
            .ok_or_else(|| FreeError::NonClosedUnderStructure {
                context: "symbol application lands outside object classes".into(),
            })?;
        ob.push(oi as u32);
    }
    let mut arr = Vec::with_capacity(hom.n_transfs());
    let two = crate::terms::walking_arrow();
    let prod = FinCat::product(&two, arity);
    for tr in 0..hom.n_transfs() {
        // The transformation as a functor 2 × Y -> carrier, then the
        // power-substitution term over it.
        let term = power_substitution_term(
            outer,
            arity,
            &prod,
            hom,
            tr,
            object_reps,
            arrow_reps,
        )?;
        let sig = ctx.signature(&term)?;
        let cls = class_of
            .get(&sig)
            .copied()
            .ok_or_else(|| FreeError::NonClosedUnderStructure {
                context: format!("symbol action at transformation {tr}"),
            })?;
        let ai = *arrow_index
            .get(&cls)
            .ok_or_else(|| FreeError::NonClosedUnderStructure {
                context: "symbol arrow action lands outside arrow classes".into(),
            })?;
        arr.push(ai as u32);
    }
    Ok((ob, arr))
}

/// `outer(h)`: glue representative terms of the classes `h` picks over the
/// canonical cover of the outer term's arity.
fn substitution_term(
    outer: &Term,
    arity: &Arc<FinCat>,
    hom: &HomCat,
    h: usize,
    object_reps: &[Term],
    arrow_reps: &[Term],
) -> Result<Term, FreeError> {
    let gens = canonical_generators(arity);
    let cover = GeneratingFamily::validate(arity.clone(), gens.clone())
        .expect("canonical generators are valid");
    let family: Vec<Term> = gens
        .iter()
        .map(|g| match *g {
            Generator::Arrow(a) => arrow_reps[hom.fn_arr(h, a)].clone(),
            Generator::Object(o) => object_reps[hom.fn_ob(h, o)].clone(),
        })
        .collect();
    let shape_arity = family
        .first()
        .map(|t| t.arity().clone())
        .unwrap_or_else(|| object_reps.first().map(|t| t.arity().clone()).unwrap());
    Ok(Term::glue_with_arity(outer.clone(), cover, family, shape_arity)?)
}

/// `outer^2(eta)`: the power of the outer 1-term glued over a
/// transformation seen as a functor `2 × Y -> carrier`.
fn power_substitution_term(
    outer: &Term,
    arity: &Arc<FinCat>,
    prod: &Arc<FinCat>,
    hom: &HomCat,
    tr: usize,
    object_reps: &[Term],
    arrow_reps: &[Term],
) -> Result<Term, FreeError> {
    let powered = Term::power2(outer.clone())?;
    let gens = canonical_generators(prod);
    let cover = GeneratingFamily::validate(prod.clone(), gens.clone())
        .expect("canonical generators are valid");
    let n_ob = arity.n_objects();
    let n_ar = arity.n_arrows();
    let two = crate::terms::walking_arrow();
    let u = two.arrow_by_label("u").expect("walking arrow");
    let (h0, h1) = (hom.tr_src(tr), hom.tr_tgt(tr));
    // Value of the induced functor 2 × Y -> classes at a product arrow or
    // object, as an index into the arrow/object class lists.
    let arrow_value = |pa: usize| -> usize {
        let (ta, ya) = (pa / n_ar, pa % n_ar);
        if ta == two.identity(0) as usize {
            hom.fn_arr(h0, ya)
        } else if ta == two.identity(1) as usize {
            hom.fn_arr(h1, ya)
        } else {
            debug_assert_eq!(ta, u);
            // The diagonal of the naturality square at ya: component at the
            // target composed with the source action.
            let comp_tgt = hom.tr_component(tr, arity.tgt(ya));
            let src_act = hom.fn_arr(h0, ya);
            hom.cat()
                .compose(comp_tgt, src_act)
                .expect("naturality square composes")
        }
    };
    let family: Vec<Term> = gens
        .iter()
        .map(|g| match *g {
            Generator::Arrow(a) => arrow_reps[arrow_value(a)].clone(),
            Generator::Object(o) => {
                let (to, yo) = (o / n_ob, o % n_ob);
                let f = if to == 0 { h0 } else { h1 };
                object_reps[hom.fn_ob(f, yo)].clone()
            }
        })
        .collect();
    let shape_arity = family
        .first()
        .map(|t| t.arity().clone())
        .unwrap_or_else(|| object_reps.first().map(|t| t.arity().clone()).unwrap());
    Ok(Term::glue_with_arity(powered, cover, family, shape_arity)?)
}

/// Report of the executable universal-property check.
#[derive(Debug, Clone, Serialize)]
pub struct UniversalReport {
    /// Every representative interprets over the target structure.
    pub representatives_interpret: bool,
    /// The induced assignment is a functor.
    pub functor_ok: bool,
    /// ... and a structure morphism.
    pub morphism_ok: bool,
    /// ... and restricts along the unit to the given functor.
    pub unit_ok: bool,
    /// Exactly one structure morphism restricts to the given functor.
    pub unique: bool,
    /// Total structure morphisms found from the free structure.
    pub morphism_count: usize,
    /// Functors from the shape into the target carrier.
    pub shape_functor_count: usize,
}

impl UniversalReport {
    pub fn all_ok(&self) -> bool {
        self.representatives_interpret
            && self.functor_ok
            && self.morphism_ok
            && self.unit_ok
            && self.unique
    }
}

/// Checks the universal property of a built free structure against a
/// target structure and a functor from the shape into its carrier: the
/// induced assignment on classes must be the unique structure morphism
/// restricting to it.
pub fn universal_property_check(
    free: &FreeStructure,
    a: &CatStructure,
    k: &FinFunctor,
    budget: &Budget,
) -> Result<UniversalReport, EvalError> {
    assert_eq!(k.dom(), &free.shape, "k must start at the free shape");
    assert_eq!(k.cod(), a.carrier(), "k must land in the target carrier");
    let ev = Evaluator::new(a, budget);
    let hom_shape = ev.hom(&free.shape)?;
    let k_idx = hom_shape
        .find_functor(
            &k.ob_map().to_vec(),
            &k.arr_map().to_vec(),
        )
        .expect("k is a functor into the carrier");

    let mut representatives_interpret = true;
    let mut ob = Vec::with_capacity(free.object_reps.len());
    for rep in &free.object_reps {
        match ev.interpret(rep)? {
            Outcome::Interpreted(Interp::One(f)) => ob.push(f.ob[k_idx]),
            _ => {
                representatives_interpret = false;
                break;
            }
        }
    }
    let mut arr = Vec::with_capacity(free.arrow_reps.len());
    if representatives_interpret {
        for rep in &free.arrow_reps {
            match ev.interpret(rep)? {
                Outcome::Interpreted(Interp::Two(n)) => arr.push(n.comp[k_idx]),
                _ => {
                    representatives_interpret = false;
                    break;
                }
            }
        }
    }
    if !representatives_interpret {
        return Ok(UniversalReport {
            representatives_interpret,
            functor_ok: false,
            morphism_ok: false,
            unit_ok: false,
            unique: false,
            morphism_count: 0,
            shape_functor_count: hom_shape.n_functors(),
        });
    }

    let induced = FinFunctor::new(
        free.structure.carrier().clone(),
        a.carrier().clone(),
        ob,
        arr,
    );
    let (functor_ok, morphism_ok, unit_ok) = match &induced {
        Ok(h) => {
            let m = check_structure_morphism(h, &free.structure, a, budget)?.is_morphism;
            let u = FinFunctor::compose(h, &free.unit) == *k;
            (true, m, u)
        }
        Err(_) => (false, false, false),
    };

    // Uniqueness by exhaustive enumeration of structure morphisms.
    let all = HomCat::build(
        free.structure.carrier().clone(),
        a.carrier().clone(),
        budget,
    )?;
    let mut morphism_count = 0usize;
    let mut restricting = 0usize;
    for i in 0..all.n_functors() {
        let cand = all.functor(i);
        if check_structure_morphism(&cand, &free.structure, a, budget)?.is_morphism {
            morphism_count += 1;
            if FinFunctor::compose(&cand, &free.unit) == *k {
                restricting += 1;
            }
        }
    }
    Ok(UniversalReport {
        representatives_interpret,
        functor_ok,
        morphism_ok,
        unit_ok,
        unique: restricting == 1,
        morphism_count,
        shape_functor_count: hom_shape.n_functors(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::is_isomorphic;
    use crate::terms::FnSym;

    fn empty_lang() -> Arc<Language> {
        Arc::new(Language::empty("empty"))
    }

    fn small_probes(lang: &Arc<Language>) -> ProbeSet {
        let carriers = [
            FinCat::one(),
            FinCat::two(),
            FinCat::iso(),
            FinCat::discrete(2),
            FinCat::three(),
        ];
        let budget = Budget::default();
        let mut out = Vec::new();
        for c in carriers {
            out.extend(
                crate::variety::enumerate_structures(lang, &c, &budget, 4).unwrap(),
            );
        }
        ProbeSet::new(out)
    }

    #[test]
    fn rule_one_inventory_at_depth_one() {
        let lang = empty_lang();
        let budget = Budget::default();
        let terms = enumerate_terms(&lang, &FinCat::one(), 1, &budget).unwrap();
        assert_eq!(terms.len(), 2); // the object and its identity arrow
        let terms = enumerate_terms(&lang, &FinCat::two(), 1, &budget).unwrap();
        assert_eq!(terms.len(), 5); // 2 objects + 3 arrows
    }

    #[test]
    fn constant_application_appears_at_depth_two() {
        let lang = Arc::new(
            Language::new(
                "const",
                vec![FnSym { name: "c".into(), arity: FinCat::empty() }],
                vec![],
            )
            .unwrap(),
        );
        let budget = Budget::default();
        let terms = enumerate_terms(&lang, &FinCat::empty(), 2, &budget).unwrap();
        // c(∅) is the gluing of the empty family under c.
        assert!(terms.iter().any(|t| matches!(
            t.node(),
            crate::terms::TermNode::Glue { family, .. } if family.is_empty()
        )));
    }

    #[test]
    fn probe_equivalence_basic_laws() {
        let lang = empty_lang();
        let probes = small_probes(&lang);
        let budget = Budget::default();
        let two = FinCat::two();
        let sigma = Term::var_arr(&two, 2).unwrap();
        // Structural equality implies probe equivalence.
        assert!(probe_equivalent(&sigma, &sigma, &probes, &budget).unwrap());
        // Composition with the domain identity is probe-equivalent to the
        // term itself.
        let lhs = Term::compose2(
            sigma.clone(),
            Term::identity2(Term::endpoint(sigma.clone(), 0).unwrap()).unwrap(),
        )
        .unwrap();
        assert!(probe_equivalent(&lhs, &sigma, &probes, &budget).unwrap());
        // The formal inverse is not equivalent to an identity 2-term: the
        // walking arrow probe distinguishes their status.
        let inv = Term::invert2(sigma.clone()).unwrap();
        let idt = Term::identity2(Term::var_obj(&two, 0).unwrap()).unwrap();
        assert!(!probe_equivalent(&inv, &idt, &probes, &budget).unwrap());
    }

    #[test]
    fn free_structure_on_empty_language_is_the_shape() {
        let lang = empty_lang();
        let probes = small_probes(&lang);
        let budget = Budget::default();
        for shape in [FinCat::one(), FinCat::two(), FinCat::iso()] {
            let free = build_free(&lang, &shape, 2, &probes, &budget).unwrap();
            assert!(
                is_isomorphic(free.structure.carrier(), &shape),
                "free carrier on {shape} must be the shape itself"
            );
            assert!(crate::fincat::is_epi(&free.unit));
            assert!(crate::fincat::is_strong_mono(&free.unit));
        }
    }

    #[test]
    fn free_structure_on_constant_language_adds_a_point() {
        let lang = Arc::new(
            Language::new(
                "const",
                vec![FnSym { name: "c".into(), arity: FinCat::empty() }],
                vec![],
            )
            .unwrap(),
        );
        let probes = small_probes(&lang);
        let budget = Budget::default();
        // On the empty shape the carrier is the single constant class.
        let free = build_free(&lang, &FinCat::empty(), 3, &probes, &budget).unwrap();
        assert!(is_isomorphic(free.structure.carrier(), &FinCat::one()));
        // On a nonempty shape the constant contributes one extra component.
        let free = build_free(&lang, &FinCat::two(), 3, &probes, &budget).unwrap();
        let expected = FinCat::coproduct(&[&FinCat::two(), &FinCat::one()]);
        assert!(is_isomorphic(free.structure.carrier(), &expected));
    }

    #[test]
    fn universal_property_on_empty_language() {
        let lang = empty_lang();
        let probes = small_probes(&lang);
        let budget = Budget::default();
        let shape = FinCat::two();
        let free = build_free(&lang, &shape, 2, &probes, &budget).unwrap();
        // Targets outside the probe set as well: the composable pair.
        let a = CatStructure::empty_lang("A", lang.clone(), FinCat::three());
        let ev = Evaluator::new(&a, &budget);
        let hom = ev.hom(&shape).unwrap();
        for i in 0..hom.n_functors() {
            let k = hom.functor(i);
            let report = universal_property_check(&free, &a, &k, &budget).unwrap();
            assert!(report.all_ok(), "{report:?}");
        }
        // Morphism count equals functor count: the hom bijection.
        let k = hom.functor(0);
        let report = universal_property_check(&free, &a, &k, &budget).unwrap();
        assert_eq!(report.morphism_count, report.shape_functor_count);
    }

    #[test]
    fn undersized_probe_set_is_flagged() {
        // With only the terminal probe, inequivalent terms merge and the
        // universal property check reports a failed leg on a structure
        // that distinguishes them.
        let lang = empty_lang();
        let tiny = ProbeSet::new(vec![CatStructure::empty_lang(
            "pt",
            lang.clone(),
            FinCat::one(),
        )]);
        let budget = Budget::default();
        let shape = FinCat::two();
        let free = build_free(&lang, &shape, 2, &tiny, &budget);
        match free {
            Ok(free) => {
                let a = CatStructure::empty_lang("A", lang.clone(), FinCat::two());
                let ev = Evaluator::new(&a, &budget);
                let hom = ev.hom(&shape).unwrap();
                let mut any_failure = false;
                for i in 0..hom.n_functors() {
                    let k = hom.functor(i);
                    let report = universal_property_check(&free, &a, &k, &budget).unwrap();
                    if !report.all_ok() {
                        any_failure = true;
                    }
                }
                assert!(
                    any_failure,
                    "terminal-only probes must fail the universal property somewhere"
                );
            }
            // Collapsing everything can also abort construction outright;
            // that is an acceptable surfacing of the coarseness.
            Err(FreeError::StructureInvalid(_)) | Err(FreeError::NonClosedUnderStructure { .. }) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn monotone_refinement_of_probes() {
        // Equivalence under a superset of probes implies equivalence under
        // the subset: enlarging the probe set only splits classes.
        let lang = empty_lang();
        let budget = Budget::default();
        let small = ProbeSet::new(vec![
            CatStructure::empty_lang("pt", lang.clone(), FinCat::one()),
            CatStructure::empty_lang("two", lang.clone(), FinCat::two()),
        ]);
        let union = {
            let mut all = small.structures().to_vec();
            all.extend(small_probes(&lang).structures().to_vec());
            ProbeSet::new(all)
        };
        let shape = FinCat::two();
        let terms = enumerate_terms(&lang, &shape, 2, &budget).unwrap();
        for s in &terms {
            for t in &terms {
                let eq_union = probe_equivalent(s, t, &union, &budget).unwrap();
                let eq_small = probe_equivalent(s, t, &small, &budget).unwrap();
                assert!(!eq_union || eq_small);
            }
        }
    }
}
