//! Image closure, the epimorphism and strong-monomorphism tests, and the
//! (epi, strong mono) factorization.
//!
//! The closure of a functor image is the smallest subcategory of the
//! codomain containing the image and closed under inversion of arrows that
//! are invertible in the codomain. Epimorphisms are exactly the functors
//! whose image closure is the whole codomain; strong monomorphisms are the
//! functors that are injective on objects, faithful, and conservative.

use std::collections::HashMap;
use std::sync::Arc;

use super::{Arrow, CatError, FinCat, FinFunctor};

/// How a closure arrow was first produced (BFS order, so each recipe is a
/// shortest derivation). Indices refer to arrows of the codomain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    /// Image of a domain arrow.
    Image { dom_arrow: usize },
    /// Composite `g ∘ f` of two closure arrows.
    Compose { g: usize, f: usize },
    /// Inverse of a closure arrow that is invertible in the codomain.
    Invert { of: usize },
}

/// The closure of a functor image, with provenance for every arrow.
#[derive(Debug, Clone)]
pub struct ImageClosure {
    /// Codomain objects in the closure, ascending.
    pub objects: Vec<usize>,
    /// Codomain arrows in the closure, ascending.
    pub arrows: Vec<usize>,
    /// First derivation of each closure arrow.
    pub recipe: HashMap<usize, Step>,
}

impl ImageClosure {
    /// Closure of the image of `f` inside its codomain.
    pub fn of_functor(f: &FinFunctor) -> ImageClosure {
        let cod = f.cod();
        let seeds = (0..f.dom().n_arrows())
            .map(|a| (f.arr(a), Step::Image { dom_arrow: a }));
        Self::close(cod, seeds)
    }

    /// Generic closure from seed arrows with their provenance.
    pub(crate) fn close(
        cod: &FinCat,
        seeds: impl IntoIterator<Item = (usize, Step)>,
    ) -> ImageClosure {
        let n = cod.n_arrows();
        let mut recipe: HashMap<usize, Step> = HashMap::new();
        let mut member = vec![false; n];
        let mut queue: Vec<usize> = Vec::new();
        for (a, step) in seeds {
            if !member[a] {
                member[a] = true;
                recipe.insert(a, step);
                queue.push(a);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            if let Some(inv) = cod.inverse(a) {
                if !member[inv] {
                    member[inv] = true;
                    recipe.insert(inv, Step::Invert { of: a });
                    queue.push(inv);
                }
            }
            // Compose with everything currently in the closure, both ways.
            let snapshot: Vec<usize> = (0..n).filter(|&b| member[b]).collect();
            for &b in &snapshot {
                for (g, f) in [(a, b), (b, a)] {
                    if let Some(c) = cod.compose(g, f) {
                        if !member[c] {
                            member[c] = true;
                            recipe.insert(c, Step::Compose { g, f });
                            queue.push(c);
                        }
                    }
                }
            }
        }
        let arrows: Vec<usize> = (0..n).filter(|&a| member[a]).collect();
        let mut objs = vec![false; cod.n_objects()];
        for &a in &arrows {
            objs[cod.src(a)] = true;
            objs[cod.tgt(a)] = true;
        }
        let objects = (0..cod.n_objects()).filter(|&o| objs[o]).collect();
        ImageClosure { objects, arrows, recipe }
    }

    pub fn contains_arrow(&self, a: usize) -> bool {
        self.arrows.binary_search(&a).is_ok()
    }

    /// Replays the recipe of `arrow` by folding `image`, `compose`, and
    /// `invert` steps. Used both to validate provenance and to build trace
    /// terms.
    pub fn replay<T: Clone>(
        &self,
        arrow: usize,
        image: &mut impl FnMut(usize) -> T,
        compose: &mut impl FnMut(T, T) -> T,
        invert: &mut impl FnMut(T) -> T,
    ) -> Option<T> {
        let mut memo: HashMap<usize, T> = HashMap::new();
        self.replay_memo(arrow, image, compose, invert, &mut memo)
    }

    fn replay_memo<T: Clone>(
        &self,
        arrow: usize,
        image: &mut impl FnMut(usize) -> T,
        compose: &mut impl FnMut(T, T) -> T,
        invert: &mut impl FnMut(T) -> T,
        memo: &mut HashMap<usize, T>,
    ) -> Option<T> {
        if let Some(v) = memo.get(&arrow) {
            return Some(v.clone());
        }
        let step = *self.recipe.get(&arrow)?;
        let v = match step {
            Step::Image { dom_arrow } => image(dom_arrow),
            Step::Compose { g, f } => {
                let vg = self.replay_memo(g, image, compose, invert, memo)?;
                let vf = self.replay_memo(f, image, compose, invert, memo)?;
                compose(vg, vf)
            }
            Step::Invert { of } => {
                let v = self.replay_memo(of, image, compose, invert, memo)?;
                invert(v)
            }
        };
        memo.insert(arrow, v.clone());
        Some(v)
    }
}

/// `f` is an epimorphism iff the closure of its image is the whole codomain.
pub fn is_epi(f: &FinFunctor) -> bool {
    let c = ImageClosure::of_functor(f);
    c.objects.len() == f.cod().n_objects() && c.arrows.len() == f.cod().n_arrows()
}

/// `f` is a strong monomorphism iff it is injective on objects, faithful,
/// and conservative.
pub fn is_strong_mono(f: &FinFunctor) -> bool {
    let dom = f.dom();
    let cod = f.cod();
    // Injective on objects.
    let mut seen = vec![false; cod.n_objects()];
    for o in 0..dom.n_objects() {
        if std::mem::replace(&mut seen[f.ob(o)], true) {
            return false;
        }
    }
    // Faithful: with object injectivity this is global arrow injectivity.
    let mut seen = vec![false; cod.n_arrows()];
    for a in 0..dom.n_arrows() {
        if std::mem::replace(&mut seen[f.arr(a)], true) {
            return false;
        }
    }
    // Conservative: reflects invertibility.
    (0..dom.n_arrows()).all(|a| !cod.is_invertible(f.arr(a)) || dom.is_invertible(a))
}

/// The (epi, strong mono) factorization of a functor through the closure of
/// its image.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub middle: Arc<FinCat>,
    /// Codomain restriction of the original functor: an epimorphism.
    pub epi: FinFunctor,
    /// Inclusion of the image closure: a strong monomorphism.
    pub mono: FinFunctor,
    /// The closure data the middle category was cut from.
    pub closure: ImageClosure,
}

/// Factorizes `f` as `mono ∘ epi` through the closure of its image.
pub fn factorize(f: &FinFunctor) -> Result<Factorization, CatError> {
    let cod = f.cod();
    let closure = ImageClosure::of_functor(f);
    let mut obj_index = vec![usize::MAX; cod.n_objects()];
    for (i, &o) in closure.objects.iter().enumerate() {
        obj_index[o] = i;
    }
    let mut arr_index = vec![usize::MAX; cod.n_arrows()];
    for (i, &a) in closure.arrows.iter().enumerate() {
        arr_index[a] = i;
    }
    let objects: Vec<String> = closure
        .objects
        .iter()
        .map(|&o| cod.object_label(o).to_string())
        .collect();
    let arrows: Vec<Arrow> = closure
        .arrows
        .iter()
        .map(|&a| Arrow {
            label: cod.arrow_label(a).to_string(),
            src: obj_index[cod.src(a)],
            tgt: obj_index[cod.tgt(a)],
        })
        .collect();
    let identities: Vec<usize> = closure
        .objects
        .iter()
        .map(|&o| arr_index[cod.identity(o) as usize])
        .collect();
    let middle = FinCat::from_table_unchecked(objects, arrows, identities, |g, f| {
        cod.compose(closure.arrows[g], closure.arrows[f]).map(|c| arr_index[c])
    })?;
    let epi = FinFunctor::new_unchecked(
        f.dom().clone(),
        middle.clone(),
        (0..f.dom().n_objects())
            .map(|o| obj_index[f.ob(o)] as u32)
            .collect(),
        (0..f.dom().n_arrows())
            .map(|a| arr_index[f.arr(a)] as u32)
            .collect(),
    );
    let mono = FinFunctor::new_unchecked(
        middle.clone(),
        cod.clone(),
        closure.objects.iter().map(|&o| o as u32).collect(),
        closure.arrows.iter().map(|&a| a as u32).collect(),
    );
    Ok(Factorization { middle, epi, mono, closure })
}
