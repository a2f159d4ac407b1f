//! Materialized functor categories.
//!
//! `HomCat` lists every functor `X -> A` and every natural transformation
//! between them, in a canonical order (lexicographic on object then arrow
//! assignments). Interpretation works directly on these flat tables; the
//! functor category is realized as a `FinCat` only on demand, since its
//! composition table is quadratic in the number of transformations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::budget::{Budget, BudgetExceeded};

use super::{Arrow, CatError, FinCat, FinFunctor};

/// One natural transformation inside a `HomCat`, components stored flat.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransHeader {
    pub src: u32,
    pub tgt: u32,
}

/// The functor category `A^X`, fully enumerated.
#[derive(Debug)]
pub struct HomCat {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    n_functors: usize,
    /// `fn_ob[f * dom.n_objects() + x]`
    fn_ob: Vec<u32>,
    /// `fn_arr[f * dom.n_arrows() + a]`
    fn_arr: Vec<u32>,
    headers: Vec<TransHeader>,
    /// `tr_comp[t * dom.n_objects() + x]`
    tr_comp: Vec<u32>,
    /// Identity transformation per functor.
    identity_tr: Vec<u32>,
    functor_lookup: HashMap<Vec<u32>, u32>,
    transf_lookup: HashMap<(u32, u32, Vec<u32>), u32>,
    realized: Mutex<Option<Arc<FinCat>>>,
}

impl HomCat {
    /// Enumerates all functors `dom -> cod` and all natural transformations.
    pub fn build(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        budget: &Budget,
    ) -> Result<Arc<HomCat>, CatError> {
        let functors = enumerate_functor_maps(&dom, &cod, budget.max_hom_objects)?;
        let n_functors = functors.len();
        let n_obj = dom.n_objects();
        let n_arr = dom.n_arrows();
        let mut fn_ob = Vec::with_capacity(n_functors * n_obj);
        let mut fn_arr = Vec::with_capacity(n_functors * n_arr);
        let mut functor_lookup = HashMap::with_capacity(n_functors);
        for (i, (ob, arr)) in functors.iter().enumerate() {
            fn_ob.extend_from_slice(ob);
            fn_arr.extend_from_slice(arr);
            let mut key = ob.clone();
            key.extend_from_slice(arr);
            functor_lookup.insert(key, i as u32);
        }

        let mut headers = Vec::new();
        let mut tr_comp = Vec::new();
        let mut identity_tr = vec![0u32; n_functors];
        let mut transf_lookup = HashMap::new();
        for s in 0..n_functors {
            for t in 0..n_functors {
                let before = headers.len();
                enumerate_transformations(
                    &dom,
                    &cod,
                    &fn_ob[s * n_obj..(s + 1) * n_obj],
                    &fn_arr[s * n_arr..(s + 1) * n_arr],
                    &fn_ob[t * n_obj..(t + 1) * n_obj],
                    &fn_arr[t * n_arr..(t + 1) * n_arr],
                    &mut |comps| {
                        headers.push(TransHeader { src: s as u32, tgt: t as u32 });
                        tr_comp.extend_from_slice(comps);
                    },
                );
                if headers.len() > budget.max_hom_arrows {
                    return Err(BudgetExceeded::new(
                        format!(
                            "natural transformations of hom({} objs, {} objs)",
                            dom.n_objects(),
                            cod.n_objects()
                        ),
                        budget.max_hom_arrows,
                    )
                    .into());
                }
                for i in before..headers.len() {
                    let comps = tr_comp[i * n_obj..(i + 1) * n_obj].to_vec();
                    if s == t && comps.iter().enumerate().all(|(x, &c)| {
                        c == cod.identity(fn_ob[s * n_obj + x] as usize)
                    }) {
                        identity_tr[s] = i as u32;
                    }
                    transf_lookup.insert((s as u32, t as u32, comps), i as u32);
                }
            }
        }

        Ok(Arc::new(HomCat {
            dom,
            cod,
            n_functors,
            fn_ob,
            fn_arr,
            headers,
            tr_comp,
            identity_tr,
            functor_lookup,
            transf_lookup,
            realized: Mutex::new(None),
        }))
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }

    pub fn n_functors(&self) -> usize {
        self.n_functors
    }

    pub fn n_transfs(&self) -> usize {
        self.headers.len()
    }

    /// Object image of functor `f` at domain object `x`.
    pub fn fn_ob(&self, f: usize, x: usize) -> usize {
        self.fn_ob[f * self.dom.n_objects() + x] as usize
    }

    /// Arrow image of functor `f` at domain arrow `a`.
    pub fn fn_arr(&self, f: usize, a: usize) -> usize {
        self.fn_arr[f * self.dom.n_arrows() + a] as usize
    }

    pub fn functor_ob_slice(&self, f: usize) -> &[u32] {
        let n = self.dom.n_objects();
        &self.fn_ob[f * n..(f + 1) * n]
    }

    pub fn functor_arr_slice(&self, f: usize) -> &[u32] {
        let n = self.dom.n_arrows();
        &self.fn_arr[f * n..(f + 1) * n]
    }

    pub fn tr_src(&self, t: usize) -> usize {
        self.headers[t].src as usize
    }

    pub fn tr_tgt(&self, t: usize) -> usize {
        self.headers[t].tgt as usize
    }

    /// Component of transformation `t` at domain object `x`.
    pub fn tr_component(&self, t: usize, x: usize) -> usize {
        self.tr_comp[t * self.dom.n_objects() + x] as usize
    }

    pub fn tr_components(&self, t: usize) -> &[u32] {
        let n = self.dom.n_objects();
        &self.tr_comp[t * n..(t + 1) * n]
    }

    pub fn identity_transf(&self, f: usize) -> usize {
        self.identity_tr[f] as usize
    }

    pub fn find_functor(&self, ob: &[u32], arr: &[u32]) -> Option<usize> {
        let mut key = ob.to_vec();
        key.extend_from_slice(arr);
        self.functor_lookup.get(&key).map(|&i| i as usize)
    }

    pub fn find_transf(&self, src: usize, tgt: usize, comps: &[u32]) -> Option<usize> {
        self.transf_lookup
            .get(&(src as u32, tgt as u32, comps.to_vec()))
            .map(|&i| i as usize)
    }

    /// Vertical composite `t2 ∘ t1`, when `tgt(t1) == src(t2)`.
    pub fn compose_transf(&self, t2: usize, t1: usize) -> Option<usize> {
        if self.tr_tgt(t1) != self.tr_src(t2) {
            return None;
        }
        let n = self.dom.n_objects();
        let comps: Vec<u32> = (0..n)
            .map(|x| {
                self.cod
                    .compose(self.tr_component(t2, x), self.tr_component(t1, x))
                    .expect("components compose") as u32
            })
            .collect();
        self.find_transf(self.tr_src(t1), self.tr_tgt(t2), &comps)
    }

    /// The functor at index `f` as a standalone validated value.
    pub fn functor(&self, f: usize) -> FinFunctor {
        FinFunctor::new_unchecked(
            self.dom.clone(),
            self.cod.clone(),
            self.functor_ob_slice(f).to_vec(),
            self.functor_arr_slice(f).to_vec(),
        )
    }

    /// A short human-readable description of functor `f`.
    pub fn describe_functor(&self, f: usize) -> String {
        let obs: Vec<String> = (0..self.dom.n_objects())
            .map(|x| {
                format!(
                    "{}↦{}",
                    self.dom.object_label(x),
                    self.cod.object_label(self.fn_ob(f, x))
                )
            })
            .collect();
        let arrs: Vec<String> = (0..self.dom.n_arrows())
            .filter(|&a| !self.dom.is_identity(a))
            .map(|a| {
                format!(
                    "{}↦{}",
                    self.dom.arrow_label(a),
                    self.cod.arrow_label(self.fn_arr(f, a))
                )
            })
            .collect();
        if arrs.is_empty() {
            format!("[{}]", obs.join(", "))
        } else {
            format!("[{}; {}]", obs.join(", "), arrs.join(", "))
        }
    }

    pub fn describe_transf(&self, t: usize) -> String {
        let comps: Vec<String> = (0..self.dom.n_objects())
            .map(|x| {
                format!(
                    "{}: {}",
                    self.dom.object_label(x),
                    self.cod.arrow_label(self.tr_component(t, x))
                )
            })
            .collect();
        format!(
            "F{}⇒F{} ({})",
            self.tr_src(t),
            self.tr_tgt(t),
            comps.join(", ")
        )
    }

    /// Realizes the functor category as a `FinCat` (objects are functors,
    /// arrows are transformations). Built once and cached.
    pub fn cat(&self) -> Arc<FinCat> {
        let mut guard = self.realized.lock().unwrap();
        if let Some(c) = guard.as_ref() {
            return c.clone();
        }
        let objects: Vec<String> = (0..self.n_functors).map(|f| format!("F{f}")).collect();
        let arrows: Vec<Arrow> = (0..self.n_transfs())
            .map(|t| Arrow {
                label: format!("t{t}"),
                src: self.tr_src(t),
                tgt: self.tr_tgt(t),
            })
            .collect();
        let identities: Vec<usize> =
            (0..self.n_functors).map(|f| self.identity_transf(f)).collect();
        let cat = FinCat::from_table_unchecked(objects, arrows, identities, |g, f| {
            self.compose_transf(g, f)
        })
        .expect("realized hom category is well-formed");
        *guard = Some(cat.clone());
        cat
    }
}

/// Enumerates functor assignments `(ob_map, arr_map)` in lexicographic
/// order via backtracking with incremental composition checks.
fn enumerate_functor_maps(
    dom: &FinCat,
    cod: &FinCat,
    max: usize,
) -> Result<Vec<(Vec<u32>, Vec<u32>)>, BudgetExceeded> {
    let n_obj = dom.n_objects();
    let n_arr = dom.n_arrows();
    if n_obj == 0 {
        return Ok(vec![(vec![], vec![])]);
    }
    if cod.n_objects() == 0 {
        return Ok(vec![]);
    }
    // Non-identity arrows in index order; identities are forced.
    let free_arrows: Vec<usize> = (0..n_arr).filter(|&a| !dom.is_identity(a)).collect();
    // For incremental checking: for each position k in `free_arrows`, the
    // composable pairs (g, f) whose members are all assigned once position k
    // is (identities count as always assigned).
    let mut pos_of = vec![usize::MAX; n_arr];
    for (k, &a) in free_arrows.iter().enumerate() {
        pos_of[a] = k;
    }
    let rank = |a: usize| -> usize {
        if dom.is_identity(a) {
            0
        } else {
            pos_of[a] + 1
        }
    };
    let mut checks_at: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); free_arrows.len() + 1];
    for g in 0..n_arr {
        for f in 0..n_arr {
            if let Some(gf) = dom.compose(g, f) {
                let r = rank(g).max(rank(f)).max(rank(gf));
                checks_at[r].push((g, f, gf));
            }
        }
    }

    let mut out = Vec::new();
    let mut ob = vec![0u32; n_obj];
    let mut arr = vec![0u32; n_arr];

    // Enumerate object assignments lexicographically.
    let mut stack_obj = 0usize;
    'outer: loop {
        if stack_obj == n_obj {
            // Objects fixed: force identities, enumerate free arrows.
            for o in 0..n_obj {
                arr[dom.identity(o) as usize] = cod.identity(ob[o] as usize);
            }
            enumerate_arrows(
                dom,
                cod,
                &free_arrows,
                &checks_at,
                &ob,
                &mut arr,
                0,
                &mut |arr_done: &[u32]| {
                    out.push((ob.clone(), arr_done.to_vec()));
                    out.len() <= max
                },
            );
            if out.len() > max {
                return Err(BudgetExceeded::new("functors in hom category", max));
            }
            // Backtrack object assignment.
            stack_obj -= 1;
            loop {
                if (ob[stack_obj] as usize) + 1 < cod.n_objects() {
                    ob[stack_obj] += 1;
                    stack_obj += 1;
                    break;
                }
                ob[stack_obj] = 0;
                if stack_obj == 0 {
                    break 'outer;
                }
                stack_obj -= 1;
            }
        } else {
            // Descend with the current (initially 0) candidate.
            stack_obj += 1;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_arrows(
    dom: &FinCat,
    cod: &FinCat,
    free_arrows: &[usize],
    checks_at: &[Vec<(usize, usize, usize)>],
    ob: &[u32],
    arr: &mut Vec<u32>,
    k: usize,
    emit: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    if k == free_arrows.len() {
        return emit(arr);
    }
    let a = free_arrows[k];
    let (x, y) = (ob[dom.src(a)] as usize, ob[dom.tgt(a)] as usize);
    for cand in 0..cod.n_arrows() {
        if cod.src(cand) != x || cod.tgt(cand) != y {
            continue;
        }
        arr[a] = cand as u32;
        let ok = checks_at[k + 1].iter().all(|&(g, f, gf)| {
            cod.compose(arr[g] as usize, arr[f] as usize) == Some(arr[gf] as usize)
        });
        if ok && !enumerate_arrows(dom, cod, free_arrows, checks_at, ob, arr, k + 1, emit) {
            return false;
        }
    }
    true
}

/// Enumerates the components of natural transformations `src ⇒ tgt` in
/// lexicographic order, checking each naturality square as soon as both of
/// its components are placed.
fn enumerate_transformations(
    dom: &FinCat,
    cod: &FinCat,
    src_ob: &[u32],
    src_arr: &[u32],
    tgt_ob: &[u32],
    tgt_arr: &[u32],
    emit: &mut impl FnMut(&[u32]),
) {
    let n_obj = dom.n_objects();
    if n_obj == 0 {
        emit(&[]);
        return;
    }
    // Arrows checkable once all components up to object o are placed.
    let mut checks_at: Vec<Vec<usize>> = vec![Vec::new(); n_obj];
    for a in 0..dom.n_arrows() {
        checks_at[dom.src(a).max(dom.tgt(a))].push(a);
    }
    let mut comps = vec![0u32; n_obj];
    fn rec(
        dom: &FinCat,
        cod: &FinCat,
        src_ob: &[u32],
        src_arr: &[u32],
        tgt_ob: &[u32],
        tgt_arr: &[u32],
        checks_at: &[Vec<usize>],
        comps: &mut Vec<u32>,
        o: usize,
        emit: &mut impl FnMut(&[u32]),
    ) {
        if o == dom.n_objects() {
            emit(comps);
            return;
        }
        let (x, y) = (src_ob[o] as usize, tgt_ob[o] as usize);
        for cand in 0..cod.n_arrows() {
            if cod.src(cand) != x || cod.tgt(cand) != y {
                continue;
            }
            comps[o] = cand as u32;
            let ok = checks_at[o].iter().all(|&a| {
                let (s, t) = (dom.src(a), dom.tgt(a));
                cod.compose(comps[t] as usize, src_arr[a] as usize)
                    == cod.compose(tgt_arr[a] as usize, comps[s] as usize)
            });
            if ok {
                rec(dom, cod, src_ob, src_arr, tgt_ob, tgt_arr, checks_at, comps, o + 1, emit);
            }
        }
    }
    rec(
        dom, cod, src_ob, src_arr, tgt_ob, tgt_arr, &checks_at, &mut comps, 0, emit,
    );
}
