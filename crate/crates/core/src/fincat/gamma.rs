//! Validated generating families.
//!
//! A generating family on a finite category `Y` is a list of generators,
//! each either an arrow of `Y` (a walking-arrow summand) or an object of
//! `Y` (a point summand). The family induces a map from the coproduct of
//! its summands onto `Y`; the family is valid when that map is an
//! epimorphism, i.e. when every arrow of `Y` is reachable from the
//! generators and the identities at covered objects by composition and by
//! inversion of arrows invertible in `Y`.
//!
//! Every arrow of `Y` carries a provenance recipe (shortest derivation in
//! breadth-first order); the gluing rule replays these recipes to assemble
//! interpretations, and trace terms replay them to build syntax.

use std::collections::HashMap;
use std::sync::Arc;

use super::{CatError, FinCat, FinFunctor};

/// One summand of a generating family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// A walking-arrow summand picking this arrow of the codomain.
    Arrow(usize),
    /// A point summand picking this object of the codomain.
    Object(usize),
}

/// Where a derived arrow's recipe bottoms out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenSeed {
    /// The arrow picked by generator `gens[idx]`.
    FromGenerator { idx: usize },
    /// The identity at a covered object.
    IdentityAt { object: usize },
}

/// One step in the derivation of an arrow of the codomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenStep {
    Seed(GenSeed),
    /// Composite `g ∘ f` of two derived arrows (codomain indices).
    Compose { g: usize, f: usize },
    /// Inverse of a derived arrow that is invertible in the codomain.
    Invert { of: usize },
}

/// A validated generating family on a finite category.
#[derive(Debug, Clone)]
pub struct GeneratingFamily {
    codomain: Arc<FinCat>,
    gens: Vec<Generator>,
    recipe: HashMap<usize, GenStep>,
}

impl PartialEq for GeneratingFamily {
    fn eq(&self, other: &Self) -> bool {
        self.codomain == other.codomain && self.gens == other.gens
    }
}

impl Eq for GeneratingFamily {}

impl std::hash::Hash for GeneratingFamily {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.codomain.fingerprint().hash(state);
        self.gens.hash(state);
    }
}

impl GeneratingFamily {
    /// Validates that the generators reach every object and arrow of `y`.
    ///
    /// Fails with `NotGenerating` carrying an unreachable arrow otherwise.
    pub fn validate(y: Arc<FinCat>, gens: Vec<Generator>) -> Result<GeneratingFamily, CatError> {
        let mut seen = std::collections::HashSet::new();
        for g in &gens {
            match *g {
                Generator::Arrow(a) if a >= y.n_arrows() => {
                    return Err(CatError::Malformed(format!(
                        "generator arrow {a} out of range"
                    )))
                }
                Generator::Object(o) if o >= y.n_objects() => {
                    return Err(CatError::Malformed(format!(
                        "generator object {o} out of range"
                    )))
                }
                _ => {}
            }
            if !seen.insert(*g) {
                return Err(CatError::Malformed("duplicate generator in family".into()));
            }
        }
        // Covered objects: endpoints of arrow generators plus object generators.
        let mut covered = vec![false; y.n_objects()];
        for g in &gens {
            match *g {
                Generator::Arrow(a) => {
                    covered[y.src(a)] = true;
                    covered[y.tgt(a)] = true;
                }
                Generator::Object(o) => covered[o] = true,
            }
        }
        let uncovered = (0..y.n_objects()).find(|&o| !covered[o]);

        // Seed the closure with generator arrows and covered identities.
        let mut recipe: HashMap<usize, GenStep> = HashMap::new();
        let mut member = vec![false; y.n_arrows()];
        let mut queue: Vec<usize> = Vec::new();
        let push = |a: usize,
                        step: GenStep,
                        member: &mut Vec<bool>,
                        queue: &mut Vec<usize>,
                        recipe: &mut HashMap<usize, GenStep>| {
            if !member[a] {
                member[a] = true;
                recipe.insert(a, step);
                queue.push(a);
            }
        };
        for (i, g) in gens.iter().enumerate() {
            if let Generator::Arrow(a) = *g {
                push(
                    a,
                    GenStep::Seed(GenSeed::FromGenerator { idx: i }),
                    &mut member,
                    &mut queue,
                    &mut recipe,
                );
            }
        }
        for o in 0..y.n_objects() {
            if covered[o] {
                push(
                    y.identity(o) as usize,
                    GenStep::Seed(GenSeed::IdentityAt { object: o }),
                    &mut member,
                    &mut queue,
                    &mut recipe,
                );
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            if let Some(inv) = y.inverse(a) {
                push(inv, GenStep::Invert { of: a }, &mut member, &mut queue, &mut recipe);
            }
            let current: Vec<usize> = (0..y.n_arrows()).filter(|&b| member[b]).collect();
            for &b in &current {
                for (g, f) in [(a, b), (b, a)] {
                    if let Some(c) = y.compose(g, f) {
                        push(c, GenStep::Compose { g, f }, &mut member, &mut queue, &mut recipe);
                    }
                }
            }
        }
        // Prefer a non-identity arrow as the unreachability witness; fall
        // back to the identity of an uncovered object.
        let missing_non_id =
            (0..y.n_arrows()).find(|&a| !member[a] && !y.is_identity(a));
        if let Some(a) = missing_non_id {
            return Err(CatError::NotGenerating { witness: a });
        }
        if let Some(o) = uncovered {
            return Err(CatError::NotGenerating { witness: y.identity(o) as usize });
        }
        if let Some(a) = (0..y.n_arrows()).find(|&a| !member[a]) {
            return Err(CatError::NotGenerating { witness: a });
        }
        Ok(GeneratingFamily { codomain: y, gens, recipe })
    }

    pub fn codomain(&self) -> &Arc<FinCat> {
        &self.codomain
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Replays the derivation of `arrow`, with fallible steps.
    ///
    /// `seed` supplies the values at generators/identities, `compose` and
    /// `invert` fold derived arrows. Any step may abort with an error.
    pub fn try_replay<T: Clone, E>(
        &self,
        arrow: usize,
        seed: &mut impl FnMut(GenSeed) -> Result<T, E>,
        compose: &mut impl FnMut(usize, T, usize, T) -> Result<T, E>,
        invert: &mut impl FnMut(usize, T) -> Result<T, E>,
    ) -> Result<T, E> {
        let mut memo: HashMap<usize, T> = HashMap::new();
        self.try_replay_memo(arrow, seed, compose, invert, &mut memo)
    }

    fn try_replay_memo<T: Clone, E>(
        &self,
        arrow: usize,
        seed: &mut impl FnMut(GenSeed) -> Result<T, E>,
        compose: &mut impl FnMut(usize, T, usize, T) -> Result<T, E>,
        invert: &mut impl FnMut(usize, T) -> Result<T, E>,
        memo: &mut HashMap<usize, T>,
    ) -> Result<T, E> {
        if let Some(v) = memo.get(&arrow) {
            return Ok(v.clone());
        }
        let step = *self
            .recipe
            .get(&arrow)
            .expect("validated family derives every arrow");
        let v = match step {
            GenStep::Seed(s) => seed(s)?,
            GenStep::Compose { g, f } => {
                let vg = self.try_replay_memo(g, seed, compose, invert, memo)?;
                let vf = self.try_replay_memo(f, seed, compose, invert, memo)?;
                compose(g, vg, f, vf)?
            }
            GenStep::Invert { of } => {
                let v = self.try_replay_memo(of, seed, compose, invert, memo)?;
                invert(of, v)?
            }
        };
        memo.insert(arrow, v.clone());
        Ok(v)
    }

    /// The induced map from the coproduct of the summands onto the codomain,
    /// materialized as a functor. Valid families induce epimorphisms.
    pub fn induced_map(&self) -> FinFunctor {
        let two = FinCat::two();
        let one = FinCat::one();
        let parts: Vec<&FinCat> = self
            .gens
            .iter()
            .map(|g| match g {
                Generator::Arrow(_) => two.as_ref(),
                Generator::Object(_) => one.as_ref(),
            })
            .collect();
        let dom = FinCat::coproduct(&parts);
        let mut ob_map = Vec::with_capacity(dom.n_objects());
        let mut arr_map = Vec::with_capacity(dom.n_arrows());
        for g in &self.gens {
            match *g {
                Generator::Arrow(a) => {
                    ob_map.push(self.codomain.src(a) as u32);
                    ob_map.push(self.codomain.tgt(a) as u32);
                    arr_map.push(self.codomain.identity(self.codomain.src(a)));
                    arr_map.push(self.codomain.identity(self.codomain.tgt(a)));
                    arr_map.push(a as u32);
                }
                Generator::Object(o) => {
                    ob_map.push(o as u32);
                    arr_map.push(self.codomain.identity(o));
                }
            }
        }
        FinFunctor::new(dom, self.codomain.clone(), ob_map, arr_map)
            .expect("induced map of a validated family is a functor")
    }
}

/// The deterministic generating family used by derived term constructors:
/// all non-identity arrows in index order, then every object not touched by
/// a non-identity arrow as a point generator.
pub fn canonical_generators(y: &FinCat) -> Vec<Generator> {
    let mut gens: Vec<Generator> = (0..y.n_arrows())
        .filter(|&a| !y.is_identity(a))
        .map(Generator::Arrow)
        .collect();
    let mut touched = vec![false; y.n_objects()];
    for a in 0..y.n_arrows() {
        if !y.is_identity(a) {
            touched[y.src(a)] = true;
            touched[y.tgt(a)] = true;
        }
    }
    gens.extend(
        (0..y.n_objects())
            .filter(|&o| !touched[o])
            .map(Generator::Object),
    );
    gens
}
