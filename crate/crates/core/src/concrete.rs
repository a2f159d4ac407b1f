//! Classical terms with interpretability over finite posets and finite
//! rational metric spaces.
//!
//! In these bases every term has trivial output arity, so terms look like
//! ordinary universal-algebra terms — variables indexed by points of the
//! arity object, symbols, and superposition — plus a gluing node carrying a
//! target object whose structure is the interpretability obstruction: a
//! gluing along the two-point chain is an inequality `t ≤ s`, a gluing
//! along the two-point space at distance ε is a quantitative equation
//! `d(t, s) ≤ ε`.
//!
//! Distances are exact non-negative rationals with a distinguished
//! infinity; verdicts never touch floating point.

use std::sync::Arc;

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::verdict::Verdict;

/// Extended non-negative rational distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ext {
    Fin(Rational64),
    Inf,
}

impl Ext {
    pub fn zero() -> Ext {
        Ext::Fin(Rational64::new(0, 1))
    }

    pub fn from_ratio(num: i64, den: i64) -> Ext {
        Ext::Fin(Rational64::new(num, den))
    }

    pub fn add(self, other: Ext) -> Ext {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => Ext::Fin(a + b),
            _ => Ext::Inf,
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        match (self, other) {
            (Ext::Fin(a), Ext::Fin(b)) => a.cmp(b),
            (Ext::Fin(_), Ext::Inf) => std::cmp::Ordering::Less,
            (Ext::Inf, Ext::Fin(_)) => std::cmp::Ordering::Greater,
            (Ext::Inf, Ext::Inf) => std::cmp::Ordering::Equal,
        }
    }
}

impl std::fmt::Display for Ext {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Ext::Fin(r) => write!(f, "{r}"),
            Ext::Inf => write!(f, "inf"),
        }
    }
}

impl Serialize for Ext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Error)]
pub enum OrdError {
    #[error("malformed object: {0}")]
    Malformed(String),
    #[error("point {point} out of range")]
    UnknownPoint { point: usize },
    #[error("unknown symbol {name:?}")]
    UnknownSymbol { name: String },
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),
    #[error(
        "interpretation of {symbol:?} is not a morphism: witness valuation pair ({v}, {w})"
    )]
    NotMorphism { symbol: String, v: usize, w: usize },
}

/// A finite poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinPos {
    labels: Vec<String>,
    /// Row-major `leq[a * n + b]` meaning `a ≤ b`.
    leq: Vec<bool>,
}

impl FinPos {
    /// Builds from generating order pairs; reflexive-transitive closure is
    /// taken, antisymmetry is validated.
    pub fn new(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<FinPos, OrdError> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(OrdError::UnknownPoint { point: a.max(b) });
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if leq[i * n + k] && leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i * n + j] && leq[j * n + i] {
                    return Err(OrdError::Malformed(format!(
                        "antisymmetry fails between {} and {}",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        Ok(FinPos { labels, leq })
    }

    pub fn chain(n: usize) -> FinPos {
        let labels = (0..n).map(|i| format!("{i}")).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        FinPos::new(labels, &pairs).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> FinPos {
        FinPos::new((0..n).map(|i| format!("{i}")).collect(), &[]).expect("antichain")
    }

    /// The four-point lattice `bot < a, b < top`.
    pub fn diamond() -> FinPos {
        FinPos::new(
            vec!["bot".into(), "a".into(), "b".into(), "top".into()],
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
        )
        .expect("diamond is a poset")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size() + b]
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn point_by_label(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    /// Greatest lower bound, when it exists.
    pub fn meet(&self, a: usize, b: usize) -> Option<usize> {
        let lowers: Vec<usize> = (0..self.size())
            .filter(|&x| self.leq(x, a) && self.leq(x, b))
            .collect();
        lowers
            .iter()
            .copied()
            .find(|&m| lowers.iter().all(|&x| self.leq(x, m)))
    }
}

/// A finite metric space with exact rational distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMet {
    labels: Vec<String>,
    dist: Vec<Ext>,
}

impl FinMet {
    /// Builds from distance entries (symmetry is implied, missing pairs are
    /// infinite); validates the metric axioms. Distinct points at distance
    /// zero are rejected: carriers are genuine metric spaces.
    pub fn new(labels: Vec<String>, entries: &[(usize, usize, Ext)]) -> Result<FinMet, OrdError> {
        let n = labels.len();
        let mut dist = vec![Ext::Inf; n * n];
        for i in 0..n {
            dist[i * n + i] = Ext::zero();
        }
        for &(a, b, d) in entries {
            if a >= n || b >= n {
                return Err(OrdError::UnknownPoint { point: a.max(b) });
            }
            if let Ext::Fin(r) = d {
                if r < Rational64::new(0, 1) {
                    return Err(OrdError::Malformed("negative distance".into()));
                }
            }
            if a == b {
                if d != Ext::zero() {
                    return Err(OrdError::Malformed("self-distance must be zero".into()));
                }
                continue;
            }
            dist[a * n + b] = d;
            dist[b * n + a] = d;
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && dist[i * n + j] == Ext::zero() {
                    return Err(OrdError::Malformed(format!(
                        "distinct points {} and {} at distance zero",
                        labels[i], labels[j]
                    )));
                }
                for k in 0..n {
                    if dist[i * n + j] > dist[i * n + k].add(dist[k * n + j]) {
                        return Err(OrdError::Malformed(format!(
                            "triangle inequality fails on ({}, {}, {})",
                            labels[i], labels[k], labels[j]
                        )));
                    }
                }
            }
        }
        Ok(FinMet { labels, dist })
    }

    pub fn point() -> FinMet {
        FinMet::new(vec!["*".into()], &[]).expect("point")
    }

    /// Two points at the given positive distance.
    pub fn two_points(d: Ext) -> FinMet {
        FinMet::new(vec!["0".into(), "1".into()], &[(0, 1, d)]).expect("two points")
    }

    /// The space on `n` points with all distances 1.
    pub fn uniform(n: usize) -> FinMet {
        let labels = (0..n).map(|i| format!("{i}")).collect();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                entries.push((i, j, Ext::from_ratio(1, 1)));
            }
        }
        FinMet::new(labels, &entries).expect("uniform space")
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn dist(&self, a: usize, b: usize) -> Ext {
        self.dist[a * self.size() + b]
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn point_by_label(&self, l: &str) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }
}

/// A base of enrichment with trivial output arities, at the level of
/// detail the classical engine needs. Morphism-hood is determined
/// pairwise in both bases (monotone / nonexpansive), which the default
/// methods exploit.
pub trait Base: Clone + std::fmt::Debug + 'static {
    type Obj: Clone + PartialEq + std::fmt::Debug + Send + Sync;

    fn size(o: &Self::Obj) -> usize;
    fn label(o: &Self::Obj, p: usize) -> String;
    /// The single pair constraint: does `a ↦ fa, b ↦ fb` respect the
    /// structure carried by the pair `(a, b)`?
    fn pair_respects(dom: &Self::Obj, cod: &Self::Obj, a: usize, b: usize, fa: usize, fb: usize)
        -> bool;
    /// Strong-subobject embedding check (order-reflecting / isometric).
    fn is_embedding(dom: &Self::Obj, cod: &Self::Obj, map: &[usize]) -> bool;
    /// Binary product object.
    fn product(a: &Self::Obj, b: &Self::Obj) -> Self::Obj;
    /// The internal hom `[z, a]` as an object over an enumerated morphism
    /// list (pointwise order / sup metric).
    fn power_object(maps: &[Vec<usize>], z: &Self::Obj, a: &Self::Obj) -> Self::Obj;

    fn is_morphism(dom: &Self::Obj, cod: &Self::Obj, map: &[usize]) -> bool {
        let n = Self::size(dom);
        (0..n).all(|a| (0..n).all(|b| Self::pair_respects(dom, cod, a, b, map[a], map[b])))
    }

    /// First pair witnessing that `map` is not a morphism.
    fn violation(dom: &Self::Obj, cod: &Self::Obj, map: &[usize]) -> Option<(usize, usize)> {
        let n = Self::size(dom);
        for a in 0..n {
            for b in 0..n {
                if !Self::pair_respects(dom, cod, a, b, map[a], map[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// All morphisms `dom -> cod` in lexicographic order.
    fn hom(dom: &Self::Obj, cod: &Self::Obj) -> Vec<Vec<usize>> {
        let n = Self::size(dom);
        let m = Self::size(cod);
        if n == 0 {
            return vec![vec![]];
        }
        if m == 0 {
            return vec![];
        }
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        loop {
            if Self::is_morphism(dom, cod, &cur) {
                out.push(cur.clone());
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] + 1 < m {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }
}

/// Posets with monotone maps.
#[derive(Debug, Clone)]
pub struct PosBase;

impl Base for PosBase {
    type Obj = FinPos;

    fn size(o: &FinPos) -> usize {
        o.size()
    }

    fn label(o: &FinPos, p: usize) -> String {
        o.label(p).to_string()
    }

    fn pair_respects(dom: &FinPos, cod: &FinPos, a: usize, b: usize, fa: usize, fb: usize) -> bool {
        !dom.leq(a, b) || cod.leq(fa, fb)
    }

    fn is_embedding(dom: &FinPos, cod: &FinPos, map: &[usize]) -> bool {
        let injective =
            (0..dom.size()).all(|a| (0..dom.size()).all(|b| a == b || map[a] != map[b]));
        injective
            && (0..dom.size())
                .all(|a| (0..dom.size()).all(|b| dom.leq(a, b) == cod.leq(map[a], map[b])))
    }

    fn product(a: &FinPos, b: &FinPos) -> FinPos {
        let n = a.size() * b.size();
        let labels = (0..a.size())
            .flat_map(|i| (0..b.size()).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", a.label(i), b.label(j)))
            .collect();
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                let (xa, xb) = (x / b.size(), x % b.size());
                let (ya, yb) = (y / b.size(), y % b.size());
                if a.leq(xa, ya) && b.leq(xb, yb) {
                    pairs.push((x, y));
                }
            }
        }
        FinPos::new(labels, &pairs).expect("product of posets is a poset")
    }

    fn power_object(maps: &[Vec<usize>], _z: &FinPos, a: &FinPos) -> FinPos {
        let labels = (0..maps.len()).map(|i| format!("f{i}")).collect();
        let mut pairs = Vec::new();
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                if f.iter().zip(g).all(|(&x, &y)| a.leq(x, y)) {
                    pairs.push((i, j));
                }
            }
        }
        FinPos::new(labels, &pairs).expect("pointwise order is a poset")
    }
}

/// Metric spaces with nonexpansive maps.
#[derive(Debug, Clone)]
pub struct MetBase;

impl Base for MetBase {
    type Obj = FinMet;

    fn size(o: &FinMet) -> usize {
        o.size()
    }

    fn label(o: &FinMet, p: usize) -> String {
        o.label(p).to_string()
    }

    fn pair_respects(dom: &FinMet, cod: &FinMet, a: usize, b: usize, fa: usize, fb: usize) -> bool {
        cod.dist(fa, fb) <= dom.dist(a, b)
    }

    fn is_embedding(dom: &FinMet, cod: &FinMet, map: &[usize]) -> bool {
        (0..dom.size())
            .all(|a| (0..dom.size()).all(|b| cod.dist(map[a], map[b]) == dom.dist(a, b)))
    }

    fn product(a: &FinMet, b: &FinMet) -> FinMet {
        // Sup metric: the categorical product for nonexpansive maps.
        let bn = b.size();
        let n = a.size() * bn;
        let labels: Vec<String> = (0..a.size())
            .flat_map(|i| (0..bn).map(move |j| (i, j)))
            .map(|(i, j)| format!("({},{})", a.label(i), b.label(j)))
            .collect();
        let mut entries = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                let (xa, xb) = (x / bn, x % bn);
                let (ya, yb) = (y / bn, y % bn);
                entries.push((x, y, a.dist(xa, ya).max(b.dist(xb, yb))));
            }
        }
        FinMet::new(labels, &entries).expect("sup metric is a metric")
    }

    fn power_object(maps: &[Vec<usize>], _z: &FinMet, a: &FinMet) -> FinMet {
        let labels = (0..maps.len()).map(|i| format!("f{i}")).collect();
        let mut entries = Vec::new();
        for (i, f) in maps.iter().enumerate() {
            for (j, g) in maps.iter().enumerate() {
                if i < j {
                    let d = f
                        .iter()
                        .zip(g)
                        .map(|(&x, &y)| a.dist(x, y))
                        .max()
                        .unwrap_or(Ext::zero());
                    entries.push((i, j, d));
                }
            }
        }
        FinMet::new(labels, &entries).expect("sup metric is a metric")
    }
}

/// A function symbol with a structured input arity.
#[derive(Debug, Clone)]
pub struct OrdSym<B: Base> {
    pub name: String,
    pub arity: B::Obj,
}

/// A language of such symbols.
#[derive(Debug, Clone)]
pub struct OrdLanguage<B: Base> {
    pub name: String,
    syms: Vec<OrdSym<B>>,
}

impl<B: Base> OrdLanguage<B> {
    pub fn new(name: impl Into<String>, syms: Vec<OrdSym<B>>) -> OrdLanguage<B> {
        OrdLanguage { name: name.into(), syms }
    }

    pub fn syms(&self) -> &[OrdSym<B>] {
        &self.syms
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.syms.iter().position(|s| s.name == name)
    }
}

/// A classical term with gluing nodes.
#[derive(Debug, Clone, PartialEq)]
pub enum OrdTerm<B: Base> {
    /// A variable: a point of the arity object.
    Var { arity: B::Obj, point: usize },
    /// A bare symbol, of the symbol's arity.
    Sym { name: String, arity: B::Obj },
    /// Gluing a point-indexed family along a target object; the target's
    /// structure is the interpretability obstruction.
    Glue { outer: Box<OrdTerm<B>>, target: B::Obj, family: Vec<OrdTerm<B>> },
}

impl<B: Base> OrdTerm<B> {
    pub fn var(arity: &B::Obj, point: usize) -> Result<OrdTerm<B>, OrdError> {
        if point >= B::size(arity) {
            return Err(OrdError::UnknownPoint { point });
        }
        Ok(OrdTerm::Var { arity: arity.clone(), point })
    }

    pub fn sym(lang: &OrdLanguage<B>, name: &str) -> Result<OrdTerm<B>, OrdError> {
        let idx = lang
            .index(name)
            .ok_or_else(|| OrdError::UnknownSymbol { name: name.into() })?;
        Ok(OrdTerm::Sym {
            name: lang.syms()[idx].name.clone(),
            arity: lang.syms()[idx].arity.clone(),
        })
    }

    /// Superposition `f(args...)`: gluing the arguments along the symbol's
    /// arity under the bare symbol.
    pub fn app(
        lang: &OrdLanguage<B>,
        name: &str,
        args: Vec<OrdTerm<B>>,
    ) -> Result<OrdTerm<B>, OrdError> {
        let f = OrdTerm::sym(lang, name)?;
        let target = f.arity().clone();
        OrdTerm::glue(f, target, args)
    }

    pub fn glue(
        outer: OrdTerm<B>,
        target: B::Obj,
        family: Vec<OrdTerm<B>>,
    ) -> Result<OrdTerm<B>, OrdError> {
        if outer.arity() != &target {
            return Err(OrdError::ArityMismatch(
                "outer term must have the gluing target as arity".into(),
            ));
        }
        if family.len() != B::size(&target) {
            return Err(OrdError::ArityMismatch(format!(
                "family has {} members for {} points",
                family.len(),
                B::size(&target)
            )));
        }
        let arity = family
            .first()
            .map(|t| t.arity().clone())
            .ok_or_else(|| OrdError::ArityMismatch("empty gluing family".into()))?;
        if family.iter().any(|t| t.arity() != &arity) {
            return Err(OrdError::ArityMismatch(
                "family members must share one arity".into(),
            ));
        }
        Ok(OrdTerm::Glue { outer: Box::new(outer), target, family })
    }

    pub fn arity(&self) -> &B::Obj {
        match self {
            OrdTerm::Var { arity, .. } | OrdTerm::Sym { arity, .. } => arity,
            OrdTerm::Glue { family, .. } => family[0].arity(),
        }
    }
}

/// A structure: carrier plus a value table per symbol over the materialized
/// valuations of the symbol's arity.
#[derive(Debug, Clone)]
pub struct OrdStructure<B: Base> {
    pub name: String,
    language: Arc<OrdLanguage<B>>,
    carrier: B::Obj,
    /// Per symbol: all valuations (morphisms arity -> carrier), lex order.
    homs: Vec<Vec<Vec<usize>>>,
    /// Per symbol: value per valuation.
    tables: Vec<Vec<usize>>,
}

impl<B: Base> OrdStructure<B> {
    /// Builds and validates: every table must be a morphism from the
    /// internal hom to the carrier (monotone resp. nonexpansive).
    pub fn new(
        name: impl Into<String>,
        language: Arc<OrdLanguage<B>>,
        carrier: B::Obj,
        tables: Vec<Vec<usize>>,
    ) -> Result<OrdStructure<B>, OrdError> {
        if tables.len() != language.syms().len() {
            return Err(OrdError::ArityMismatch("one table per symbol required".into()));
        }
        let mut homs = Vec::with_capacity(tables.len());
        for (sym, table) in language.syms().iter().zip(&tables) {
            let hom = B::hom(&sym.arity, &carrier);
            if table.len() != hom.len() {
                return Err(OrdError::ArityMismatch(format!(
                    "symbol {}: table has {} entries for {} valuations",
                    sym.name,
                    table.len(),
                    hom.len()
                )));
            }
            if let Some(&v) = table.iter().find(|&&v| v >= B::size(&carrier)) {
                return Err(OrdError::UnknownPoint { point: v });
            }
            let hom_obj = B::power_object(&hom, &sym.arity, &carrier);
            if let Some((v, w)) = B::violation(&hom_obj, &carrier, table) {
                return Err(OrdError::NotMorphism { symbol: sym.name.clone(), v, w });
            }
            homs.push(hom);
        }
        Ok(OrdStructure { name: name.into(), language, carrier, homs, tables })
    }

    pub fn language(&self) -> &Arc<OrdLanguage<B>> {
        &self.language
    }

    pub fn carrier(&self) -> &B::Obj {
        &self.carrier
    }

    pub fn sym_table(&self, idx: usize) -> &[usize] {
        &self.tables[idx]
    }

    pub fn sym_hom(&self, idx: usize) -> &[Vec<usize>] {
        &self.homs[idx]
    }

    /// Renders a valuation as `point ↦ value` pairs.
    pub fn render_valuation(&self, arity: &B::Obj, v: &[usize]) -> String {
        (0..B::size(arity))
            .map(|p| format!("{}↦{}", B::label(arity, p), B::label(&self.carrier, v[p])))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Witness for a failed check: the valuation where it breaks.
#[derive(Debug, Clone, Serialize)]
pub struct OrdWitness {
    pub valuation: String,
}

#[derive(Debug, Clone)]
pub enum OrdOutcome {
    /// Value per valuation of the term's arity.
    Interpreted(Vec<usize>),
    NotInterpretable(OrdWitness),
}

impl OrdOutcome {
    pub fn is_interpretable(&self) -> bool {
        matches!(self, OrdOutcome::Interpreted(_))
    }

    pub fn table(&self) -> Option<&[usize]> {
        match self {
            OrdOutcome::Interpreted(t) => Some(t),
            _ => None,
        }
    }
}

/// Interprets a term over a structure: a value table over the valuations of
/// the term's arity, or the witness valuation where a gluing fails.
pub fn interpret_ord<B: Base>(
    t: &OrdTerm<B>,
    a: &OrdStructure<B>,
) -> Result<OrdOutcome, OrdError> {
    let vals = B::hom(t.arity(), a.carrier());
    interpret_over(t, a, &vals)
}

fn interpret_over<B: Base>(
    t: &OrdTerm<B>,
    a: &OrdStructure<B>,
    vals: &[Vec<usize>],
) -> Result<OrdOutcome, OrdError> {
    match t {
        OrdTerm::Var { point, .. } => {
            Ok(OrdOutcome::Interpreted(vals.iter().map(|v| v[*point]).collect()))
        }
        OrdTerm::Sym { name, arity } => {
            let idx = a
                .language()
                .index(name)
                .ok_or_else(|| OrdError::UnknownSymbol { name: name.clone() })?;
            if &a.language().syms()[idx].arity != arity {
                return Err(OrdError::ArityMismatch(format!(
                    "symbol {name} used at a different arity"
                )));
            }
            // The bare symbol's valuations are exactly the stored hom list.
            debug_assert_eq!(a.sym_hom(idx).len(), vals.len());
            Ok(OrdOutcome::Interpreted(a.sym_table(idx).to_vec()))
        }
        OrdTerm::Glue { outer, target, family } => {
            let mut member_tables = Vec::with_capacity(family.len());
            for m in family {
                match interpret_over(m, a, vals)? {
                    OrdOutcome::Interpreted(t) => member_tables.push(t),
                    ni @ OrdOutcome::NotInterpretable(_) => return Ok(ni),
                }
            }
            // For each valuation, the induced point map must respect the
            // target's structure.
            let target_vals = B::hom(target, a.carrier());
            let mut outer_at = Vec::with_capacity(vals.len());
            for (vi, _) in vals.iter().enumerate() {
                let tuple: Vec<usize> = member_tables.iter().map(|t| t[vi]).collect();
                if !B::is_morphism(target, a.carrier(), &tuple) {
                    return Ok(OrdOutcome::NotInterpretable(OrdWitness {
                        valuation: a.render_valuation(family[0].arity(), &vals[vi]),
                    }));
                }
                let idx = target_vals
                    .iter()
                    .position(|w| w == &tuple)
                    .expect("a respecting tuple is a valuation");
                outer_at.push(idx);
            }
            match interpret_over(outer, a, &target_vals)? {
                OrdOutcome::Interpreted(outer_table) => Ok(OrdOutcome::Interpreted(
                    outer_at.iter().map(|&i| outer_table[i]).collect(),
                )),
                ni @ OrdOutcome::NotInterpretable(_) => Ok(ni),
            }
        }
    }
}

pub type OrdVerdict = Verdict<OrdWitness>;

/// Pos inequality `t ≤ s`: definedness of the gluing of `(t, s)` along the
/// two-point chain.
pub fn check_inequality(
    t: &OrdTerm<PosBase>,
    s: &OrdTerm<PosBase>,
    a: &OrdStructure<PosBase>,
) -> Result<OrdVerdict, OrdError> {
    let chain = FinPos::chain(2);
    let outer = OrdTerm::var(&chain, 0)?;
    let glued = OrdTerm::glue(outer, chain, vec![t.clone(), s.clone()])?;
    defined_verdict(&glued, a)
}

/// Met quantitative equation `d(t, s) ≤ ε`: definedness of the gluing of
/// `(t, s)` along the two-point space at distance ε.
pub fn check_quantitative(
    t: &OrdTerm<MetBase>,
    s: &OrdTerm<MetBase>,
    eps: Ext,
    a: &OrdStructure<MetBase>,
) -> Result<OrdVerdict, OrdError> {
    let pair = FinMet::two_points(eps);
    let outer = OrdTerm::var(&pair, 0)?;
    let glued = OrdTerm::glue(outer, pair, vec![t.clone(), s.clone()])?;
    defined_verdict(&glued, a)
}

fn defined_verdict<B: Base>(
    t: &OrdTerm<B>,
    a: &OrdStructure<B>,
) -> Result<OrdVerdict, OrdError> {
    Ok(match interpret_ord(t, a)? {
        OrdOutcome::Interpreted(_) => Verdict::holds(),
        OrdOutcome::NotInterpretable(w) => Verdict::fails(w),
    })
}

/// A judgement for the concrete engines.
#[derive(Debug, Clone)]
pub enum OrdJudgement<B: Base> {
    Defined(OrdTerm<B>),
    Equal(OrdTerm<B>, OrdTerm<B>),
}

/// A theory: a list of judgements over a language.
#[derive(Debug, Clone)]
pub struct OrdTheory<B: Base> {
    pub name: String,
    pub language: Arc<OrdLanguage<B>>,
    pub judgements: Vec<OrdJudgement<B>>,
}

impl OrdTheory<PosBase> {
    /// Sugar: the inequality `t ≤ s` as a definedness judgement.
    pub fn inequality(
        t: OrdTerm<PosBase>,
        s: OrdTerm<PosBase>,
    ) -> Result<OrdJudgement<PosBase>, OrdError> {
        let chain = FinPos::chain(2);
        let outer = OrdTerm::var(&chain, 0)?;
        Ok(OrdJudgement::Defined(OrdTerm::glue(outer, chain, vec![t, s])?))
    }
}

impl OrdTheory<MetBase> {
    /// Sugar: the quantitative equation `d(t, s) ≤ ε`.
    pub fn within(
        t: OrdTerm<MetBase>,
        s: OrdTerm<MetBase>,
        eps: Ext,
    ) -> Result<OrdJudgement<MetBase>, OrdError> {
        let pair = FinMet::two_points(eps);
        let outer = OrdTerm::var(&pair, 0)?;
        Ok(OrdJudgement::Defined(OrdTerm::glue(outer, pair, vec![t, s])?))
    }
}

/// Checks one judgement.
pub fn check_ord_judgement<B: Base>(
    j: &OrdJudgement<B>,
    a: &OrdStructure<B>,
) -> Result<OrdVerdict, OrdError> {
    match j {
        OrdJudgement::Defined(t) => defined_verdict(t, a),
        OrdJudgement::Equal(s, t) => {
            let vals = B::hom(s.arity(), a.carrier());
            let si = interpret_over(s, a, &vals)?;
            let ti = interpret_over(t, a, &vals)?;
            match (si, ti) {
                (OrdOutcome::Interpreted(x), OrdOutcome::Interpreted(y)) => {
                    match x.iter().zip(&y).position(|(a, b)| a != b) {
                        None => Ok(Verdict::holds()),
                        Some(vi) => Ok(Verdict::fails(OrdWitness {
                            valuation: a.render_valuation(s.arity(), &vals[vi]),
                        })),
                    }
                }
                (OrdOutcome::NotInterpretable(w), _) | (_, OrdOutcome::NotInterpretable(w)) => {
                    Ok(Verdict::not_interpretable(w))
                }
            }
        }
    }
}

/// Model check: the conjunction over a theory.
pub fn is_ord_model<B: Base>(
    a: &OrdStructure<B>,
    theory: &OrdTheory<B>,
) -> Result<bool, OrdError> {
    for j in &theory.judgements {
        if !check_ord_judgement(j, a)?.is_holds() {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---- structure combinators for the closure properties ----

/// Product structure on the product carrier.
pub fn product_ord<B: Base>(
    a: &OrdStructure<B>,
    b: &OrdStructure<B>,
) -> Result<OrdStructure<B>, OrdError> {
    let carrier = B::product(a.carrier(), b.carrier());
    let bn = B::size(b.carrier());
    let lang = a.language().clone();
    let mut tables = Vec::new();
    for (idx, sym) in lang.syms().iter().enumerate() {
        let hom = B::hom(&sym.arity, &carrier);
        let mut table = Vec::with_capacity(hom.len());
        for v in &hom {
            let va: Vec<usize> = v.iter().map(|&p| p / bn).collect();
            let vb: Vec<usize> = v.iter().map(|&p| p % bn).collect();
            let ia = a
                .sym_hom(idx)
                .iter()
                .position(|w| w == &va)
                .expect("projection of a valuation is a valuation");
            let ib = b
                .sym_hom(idx)
                .iter()
                .position(|w| w == &vb)
                .expect("projection of a valuation is a valuation");
            table.push(a.sym_table(idx)[ia] * bn + b.sym_table(idx)[ib]);
        }
        tables.push(table);
    }
    OrdStructure::new(format!("({}×{})", a.name, b.name), lang, carrier, tables)
}

/// Power structure on the internal hom `[z, carrier]`.
pub fn power_ord<B: Base>(
    a: &OrdStructure<B>,
    z: &B::Obj,
) -> Result<OrdStructure<B>, OrdError> {
    let base_maps = B::hom(z, a.carrier());
    let carrier = B::power_object(&base_maps, z, a.carrier());
    let lang = a.language().clone();
    let zn = B::size(z);
    let mut tables = Vec::new();
    for (idx, sym) in lang.syms().iter().enumerate() {
        let hom = B::hom(&sym.arity, &carrier);
        let mut table = Vec::with_capacity(hom.len());
        for v in &hom {
            // v assigns to each arity point a map z -> carrier; evaluate
            // pointwise in z.
            let mut images = Vec::with_capacity(zn);
            for zp in 0..zn {
                let slice: Vec<usize> = v.iter().map(|&m| base_maps[m][zp]).collect();
                let iv = a
                    .sym_hom(idx)
                    .iter()
                    .position(|w| w == &slice)
                    .expect("pointwise slice of a valuation is a valuation");
                images.push(a.sym_table(idx)[iv]);
            }
            let im = base_maps
                .iter()
                .position(|m| m == &images)
                .expect("pointwise application is a morphism");
            table.push(im);
        }
        tables.push(table);
    }
    OrdStructure::new(format!("{}^Z", a.name), lang, carrier, tables)
}

/// All substructures whose inclusion is an embedding closed under every
/// symbol, returned as (point subset, substructure).
pub fn strong_substructures<B: Base>(
    a: &OrdStructure<B>,
    restrict: impl Fn(&B::Obj, &[usize]) -> B::Obj,
) -> Vec<(Vec<usize>, OrdStructure<B>)> {
    let n = B::size(a.carrier());
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let pts: Vec<usize> = (0..n).filter(|&p| mask & (1 << p) != 0).collect();
        let sub = restrict(a.carrier(), &pts);
        if !B::is_embedding(&sub, a.carrier(), &pts) {
            continue;
        }
        // Closure under the symbol interpretations.
        let lang = a.language().clone();
        let mut tables = Vec::new();
        let mut closed = true;
        'syms: for (idx, sym) in lang.syms().iter().enumerate() {
            let hom_sub = B::hom(&sym.arity, &sub);
            let mut table = Vec::with_capacity(hom_sub.len());
            for v in &hom_sub {
                let lifted: Vec<usize> = v.iter().map(|&p| pts[p]).collect();
                let iv = a
                    .sym_hom(idx)
                    .iter()
                    .position(|w| w == &lifted)
                    .expect("embedded valuation is a valuation");
                let value = a.sym_table(idx)[iv];
                match pts.iter().position(|&p| p == value) {
                    Some(local) => table.push(local),
                    None => {
                        closed = false;
                        break 'syms;
                    }
                }
            }
            tables.push(table);
        }
        if closed {
            if let Ok(s) =
                OrdStructure::new(format!("{}|sub", a.name), lang, sub, tables)
            {
                out.push((pts, s));
            }
        }
    }
    out
}

/// Split quotients: structure morphisms `e: a -> c` with a base-level
/// section, searched over candidate structures.
pub fn split_quotients<'c, B: Base>(
    a: &OrdStructure<B>,
    candidates: &'c [OrdStructure<B>],
) -> Vec<(&'c OrdStructure<B>, Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for c in candidates {
        for e in B::hom(a.carrier(), c.carrier()) {
            if !is_ord_morphism(&e, a, c) {
                continue;
            }
            for r in B::hom(c.carrier(), a.carrier()) {
                let splits = (0..B::size(c.carrier())).all(|p| e[r[p]] == p);
                if splits {
                    out.push((c, e.clone(), r.clone()));
                }
            }
        }
    }
    out
}

/// Structure-morphism check for the concrete engines: every symbol square
/// commutes.
pub fn is_ord_morphism<B: Base>(
    h: &[usize],
    a: &OrdStructure<B>,
    b: &OrdStructure<B>,
) -> bool {
    if !B::is_morphism(a.carrier(), b.carrier(), h) {
        return false;
    }
    for (idx, _sym) in a.language().syms().iter().enumerate() {
        for (vi, v) in a.sym_hom(idx).iter().enumerate() {
            let pushed: Vec<usize> = v.iter().map(|&p| h[p]).collect();
            let Some(wi) = b.sym_hom(idx).iter().position(|w| w == &pushed) else {
                return false;
            };
            if h[a.sym_table(idx)[vi]] != b.sym_table(idx)[wi] {
                return false;
            }
        }
    }
    true
}

/// Restriction of a poset to a point subset.
pub fn restrict_pos(p: &FinPos, pts: &[usize]) -> FinPos {
    let labels = pts.iter().map(|&i| p.label(i).to_string()).collect();
    let mut pairs = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate() {
            if p.leq(a, b) {
                pairs.push((i, j));
            }
        }
    }
    FinPos::new(labels, &pairs).expect("restriction of a poset is a poset")
}

/// Restriction of a metric space to a point subset.
pub fn restrict_met(m: &FinMet, pts: &[usize]) -> FinMet {
    let labels = pts.iter().map(|&i| m.label(i).to_string()).collect();
    let mut entries = Vec::new();
    for (i, &a) in pts.iter().enumerate() {
        for (j, &b) in pts.iter().enumerate() {
            if i < j {
                entries.push((i, j, m.dist(a, b)));
            }
        }
    }
    FinMet::new(labels, &entries).expect("subspace of a metric space is a metric space")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn min_lattice_structure() -> OrdStructure<PosBase> {
        // The two-chain with binary meet.
        let chain = FinPos::chain(2);
        let arity = FinPos::antichain(2);
        let lang = Arc::new(OrdLanguage::new(
            "meet",
            vec![OrdSym { name: "min".into(), arity: arity.clone() }],
        ));
        let hom = PosBase::hom(&arity, &chain);
        let table: Vec<usize> = hom.iter().map(|v| v[0].min(v[1])).collect();
        OrdStructure::new("chain2", lang, chain, vec![table]).unwrap()
    }

    #[test]
    fn min_inequality_holds_on_the_chain() {
        // min(x, y) ≤ x over all four valuations.
        let s = min_lattice_structure();
        let arity = FinPos::antichain(2);
        let x = OrdTerm::var(&arity, 0).unwrap();
        let y = OrdTerm::var(&arity, 1).unwrap();
        let min_xy = OrdTerm::app(s.language(), "min", vec![x.clone(), y]).unwrap();
        let v = check_inequality(&min_xy, &x, &s).unwrap();
        assert!(v.is_holds());
        // x ≤ min(x, y) fails with a witness.
        let v = check_inequality(&x, &min_xy, &s).unwrap();
        assert!(!v.is_holds());
        assert!(v.witness.is_some());
        // Reflexivity.
        assert!(check_inequality(&x, &x, &s).unwrap().is_holds());
    }

    #[test]
    fn quantitative_equation_on_two_points() {
        // Two points at distance 1: d(x, y) ≤ 1 holds, ≤ 1/2 fails.
        let space = FinMet::two_points(Ext::from_ratio(1, 1));
        let arity = FinMet::uniform(2);
        let lang: Arc<OrdLanguage<MetBase>> = Arc::new(OrdLanguage::new("none", vec![]));
        let s = OrdStructure::new("pair", lang, space, vec![]).unwrap();
        let x = OrdTerm::var(&arity, 0).unwrap();
        let y = OrdTerm::var(&arity, 1).unwrap();
        // The arity is uniform at distance 1, so valuations are all maps
        // within distance 1 of each other: all four point pairs.
        let v = check_quantitative(&x, &y, Ext::from_ratio(1, 1), &s).unwrap();
        assert!(v.is_holds());
        let v = check_quantitative(&x, &y, Ext::from_ratio(1, 2), &s).unwrap();
        assert!(!v.is_holds());
        assert!(v.witness.is_some());
    }

    #[test]
    fn variables_always_interpret() {
        let s = min_lattice_structure();
        let arity = FinPos::antichain(2);
        let x = OrdTerm::var(&arity, 0).unwrap();
        assert!(interpret_ord(&x, &s).unwrap().is_interpretable());
    }

    #[test]
    fn structure_validation_rejects_non_monotone() {
        // A unary "negation" on the chain is not monotone.
        let chain = FinPos::chain(2);
        let arity = FinPos::antichain(1);
        let lang: Arc<OrdLanguage<PosBase>> = Arc::new(OrdLanguage::new(
            "neg",
            vec![OrdSym { name: "neg".into(), arity: arity.clone() }],
        ));
        let table = vec![1usize, 0];
        let r = OrdStructure::new("bad", lang, chain, vec![table]);
        assert!(matches!(r, Err(OrdError::NotMorphism { .. })));
    }

    #[test]
    fn constant_interpretations_validate() {
        let chain = FinPos::chain(3);
        let arity = FinPos::antichain(2);
        let lang: Arc<OrdLanguage<PosBase>> = Arc::new(OrdLanguage::new(
            "c",
            vec![OrdSym { name: "k".into(), arity: arity.clone() }],
        ));
        let hom = PosBase::hom(&arity, &chain);
        let table = vec![1usize; hom.len()];
        assert!(OrdStructure::new("const", lang, chain, vec![table]).is_ok());
    }

    #[test]
    fn epsilon_monotonicity() {
        // If d(t, s) ≤ ε holds then it holds for every ε' ≥ ε.
        let space = FinMet::two_points(Ext::from_ratio(1, 2));
        let arity = FinMet::uniform(2);
        let lang: Arc<OrdLanguage<MetBase>> = Arc::new(OrdLanguage::new("none", vec![]));
        let s = OrdStructure::new("pair", lang, space, vec![]).unwrap();
        let x = OrdTerm::var(&arity, 0).unwrap();
        let y = OrdTerm::var(&arity, 1).unwrap();
        let mut prev = false;
        for eps in [
            Ext::from_ratio(1, 4),
            Ext::from_ratio(1, 2),
            Ext::from_ratio(3, 4),
            Ext::from_ratio(2, 1),
        ] {
            let holds = check_quantitative(&x, &y, eps, &s).unwrap().is_holds();
            assert!(!prev || holds, "holding must be upward closed in ε");
            prev = holds;
        }
        assert!(prev, "a large enough ε always holds on this carrier");
    }

    #[test]
    fn embeddings_are_detected() {
        let chain = FinPos::chain(2);
        let anti = FinPos::antichain(2);
        // Identity is an embedding.
        assert!(PosBase::is_embedding(&chain, &chain, &[0, 1]));
        // Collapsing the order is not.
        assert!(!PosBase::is_embedding(&chain, &anti, &[0, 1]));
        // Metric subspace inclusion is isometric.
        let m = FinMet::two_points(Ext::from_ratio(1, 1));
        let sub = restrict_met(&m, &[1]);
        assert!(MetBase::is_embedding(&sub, &m, &[1]));
    }

    #[test]
    fn gluing_free_terms_match_classical_evaluation() {
        // Oracle: direct recursive evaluation over tuples, for discrete
        // arities.
        let s = min_lattice_structure();
        let arity = FinPos::antichain(2);
        let x = OrdTerm::var(&arity, 0).unwrap();
        let y = OrdTerm::var(&arity, 1).unwrap();
        let t = OrdTerm::app(s.language(), "min", vec![y.clone(), x.clone()]).unwrap();
        let table = match interpret_ord(&t, &s).unwrap() {
            OrdOutcome::Interpreted(t) => t,
            _ => panic!("superposition of total symbols interprets"),
        };
        fn oracle(
            t: &OrdTerm<PosBase>,
            s: &OrdStructure<PosBase>,
            v: &[usize],
        ) -> usize {
            match t {
                OrdTerm::Var { point, .. } => v[*point],
                OrdTerm::Sym { .. } => unreachable!("bare symbols handled via app"),
                OrdTerm::Glue { outer, family, .. } => {
                    let args: Vec<usize> =
                        family.iter().map(|m| oracle(m, s, v)).collect();
                    match outer.as_ref() {
                        OrdTerm::Sym { name, .. } => {
                            let idx = s.language().index(name).unwrap();
                            let vi = s
                                .sym_hom(idx)
                                .iter()
                                .position(|w| w == &args)
                                .unwrap();
                            s.sym_table(idx)[vi]
                        }
                        _ => unreachable!("oracle covers applications only"),
                    }
                }
            }
        }
        let vals = PosBase::hom(&arity, s.carrier());
        for (vi, v) in vals.iter().enumerate() {
            assert_eq!(table[vi], oracle(&t, &s, v));
        }
    }
}
