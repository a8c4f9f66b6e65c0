//! Gibbs representations of functional modalities and the low-interaction
//! families built from geometric means.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::kernels::{is_r_robust_modalities, rows_close, FunctionalModalities, StochasticMap};
use crate::robustness::{DeltaFamily, RobustnessSpec};
use crate::space::{NodeSet, StateSpace};

/// Largest number of inputs handled by this module.
pub const MAX_GIBBS_NODES: usize = 12;

/// Relative tolerance for identities involving logarithms.
pub const GIBBS_TOL: f64 = 1e-10;

fn check_size(space: &StateSpace) -> Result<()> {
    if space.n() > MAX_GIBBS_NODES {
        return Err(Error::TooManyNodes { n: space.n(), max: MAX_GIBBS_NODES });
    }
    Ok(())
}

/// Potentials `φ_A : X_A × X_0 → ℝ`, one table per `A ⊆ [n]`, indexed
/// `[A.bits()][x_A][x_0]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GibbsPotentials {
    space: StateSpace,
    tables: Vec<Vec<Vec<f64>>>,
}

impl GibbsPotentials {
    pub fn new(space: &StateSpace, tables: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        check_size(space)?;
        if tables.len() != 1 << space.n() {
            return Err(Error::Shape(format!("need {} potentials, got {}", 1 << space.n(), tables.len())));
        }
        for (bits, t) in tables.iter().enumerate() {
            let set = NodeSet(bits as u32);
            if t.len() != space.sub_size(set) || t.iter().any(|r| r.len() != space.output_size()) {
                return Err(Error::Shape(format!("potential on {set} has the wrong shape")));
            }
            if t.iter().flatten().any(|v| !v.is_finite()) {
                return Err(Error::Shape(format!("potential on {set} has a non-finite entry")));
            }
        }
        Ok(GibbsPotentials { space: space.clone(), tables })
    }

    pub fn zero(space: &StateSpace) -> Self {
        let tables = NodeSet::all(space.n())
            .map(|a| vec![vec![0.0; space.output_size()]; space.sub_size(a)])
            .collect();
        GibbsPotentials { space: space.clone(), tables }
    }

    pub fn space(&self) -> &StateSpace {
        &self.space
    }

    pub fn get(&self, set: NodeSet) -> &[Vec<f64>] {
        &self.tables[set.bits() as usize]
    }

    pub fn get_mut(&mut self, set: NodeSet) -> &mut [Vec<f64>] {
        &mut self.tables[set.bits() as usize]
    }

    /// `φ_B(x|_B, ·)` for a full input state `x`.
    pub fn at_state(&self, set: NodeSet, x: usize) -> &[f64] {
        &self.get(set)[self.space.restrict_index(x, set)]
    }

    pub fn tables(&self) -> &[Vec<Vec<f64>>] {
        &self.tables
    }
}

fn ln_table(map: &StochasticMap<f64>) -> Result<Vec<Vec<f64>>> {
    map.rows()
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| {
                    if v > 0.0 {
                        Ok(v.ln())
                    } else {
                        Err(Error::NonPositiveEntry { domain: map.domain(), row: i, output: j })
                    }
                })
                .collect()
        })
        .collect()
}

/// `φ_A(x_A, x_0) = Σ_{C ⊆ A} (−1)^{|A∖C|} ln κ_C(x_A|_C; x_0)`.
pub fn moebius_potentials(modalities: &FunctionalModalities<f64>) -> Result<GibbsPotentials> {
    let space = modalities.space();
    check_size(space)?;
    let logs: Vec<Vec<Vec<f64>>> = modalities.maps().iter().map(ln_table).collect::<Result<_>>()?;
    let d0 = space.output_size();
    let tables = NodeSet::all(space.n())
        .map(|a| {
            (0..space.sub_size(a))
                .map(|xa| {
                    let mut acc = vec![0.0; d0];
                    for c in a.subsets() {
                        let sign = if (a.len() - c.len()) % 2 == 0 { 1.0 } else { -1.0 };
                        let row = &logs[c.bits() as usize][space.restrict_sub_index(a, xa, c)];
                        for (s, v) in acc.iter_mut().zip(row) {
                            *s += sign * v;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(GibbsPotentials { space: space.clone(), tables })
}

/// Normalized exponential of a vector of log-weights; `-∞` entries become 0.
/// Returns `None` when every entry is `-∞`.
pub fn softmax(logits: &[f64]) -> Option<Vec<f64>> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return None;
    }
    let exps: Vec<f64> = logits.iter().map(|&v| (v - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    Some(exps.into_iter().map(|v| v / total).collect())
}

/// `κ_A(x_A; x_0) ∝ exp(Σ_{B ⊆ A} φ_B(x_A|_B, x_0))`.
pub fn gibbs_to_modalities(potentials: &GibbsPotentials) -> FunctionalModalities<f64> {
    let space = potentials.space();
    let d0 = space.output_size();
    let maps = NodeSet::all(space.n())
        .map(|a| {
            let rows = (0..space.sub_size(a))
                .map(|xa| {
                    let mut logits = vec![0.0; d0];
                    for b in a.subsets() {
                        let row = &potentials.get(b)[space.restrict_sub_index(a, xa, b)];
                        for (s, v) in logits.iter_mut().zip(row) {
                            *s += v;
                        }
                    }
                    softmax(&logits).expect("finite potentials")
                })
                .collect();
            StochasticMap::new(space, a, rows).expect("softmax rows are stochastic")
        })
        .collect();
    FunctionalModalities::new(space, maps).expect("one map per subset")
}

/// `Σ_{B ⊄ R} φ_B(x|_B, x_0)` as a function of `x_0`.
pub fn knockout_residual(potentials: &GibbsPotentials, x: usize, set: NodeSet) -> Vec<f64> {
    let space = potentials.space();
    let mut acc = vec![0.0; space.output_size()];
    for b in NodeSet::all(space.n()).filter(|b| !b.is_subset(set)) {
        for (s, v) in acc.iter_mut().zip(potentials.at_state(b, x)) {
            *s += v;
        }
    }
    acc
}

/// Whether a vector is constant up to `tol` relative to its magnitude.
pub fn is_constant(values: &[f64], tol: f64) -> bool {
    let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    hi - lo <= tol * scale
}

/// Robustness in `x` against knockout of `[n] ∖ R`, decided by constancy of
/// the knockout residual of the Möbius potentials.
pub fn is_robust_via_potentials(
    modalities: &FunctionalModalities<f64>,
    x: usize,
    set: NodeSet,
    tol: f64,
) -> Result<bool> {
    let space = modalities.space();
    space.check_state(x)?;
    space.check_set(set)?;
    let potentials = moebius_potentials(modalities)?;
    let by_residual = is_constant(&knockout_residual(&potentials, x, set), tol);
    let direct = rows_close(modalities.full().row(x), modalities.get(set).row_of_state(x), tol.sqrt());
    debug_assert_eq!(by_residual, direct, "residual criterion disagrees with the direct check");
    if cfg!(debug_assertions) {
        let mut single = RobustnessSpec::empty(space.clone());
        single.insert(set, space.restrict_coords(&space.coords_of(x), set))?;
        debug_assert_eq!(direct, is_r_robust_modalities(modalities, &single, &[x], tol.sqrt())?);
    }
    Ok(by_residual)
}

/// Strictly positive maps keyed by their domain.
pub type BaseMaps = BTreeMap<NodeSet, StochasticMap<f64>>;

/// The members of a family whose domain satisfies `keep`.
pub fn base_maps(modalities: &FunctionalModalities<f64>, keep: impl Fn(NodeSet) -> bool) -> BaseMaps {
    modalities.maps().iter().filter(|m| keep(m.domain())).map(|m| (m.domain(), m.clone())).collect()
}

/// Result of a geometric-mean construction. Rows whose geometric mean is
/// identically zero cannot be normalized; they are set to uniform and listed
/// in `degenerate` as `(domain, row)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    pub modalities: FunctionalModalities<f64>,
    pub degenerate: Vec<(NodeSet, usize)>,
}

fn positive_logs(map: &StochasticMap<f64>, strict: bool) -> Result<Vec<Vec<f64>>> {
    if strict {
        return ln_table(map);
    }
    Ok(map
        .rows()
        .iter()
        .map(|r| r.iter().map(|&v| if v > 0.0 { v.ln() } else { f64::NEG_INFINITY }).collect())
        .collect())
}

/// Builds each `κ_C` either as a copy of its own base map (when `parts(C, x_C)`
/// is `None`) or as the normalized geometric mean of the listed base maps.
fn assemble(
    space: &StateSpace,
    base: &BaseMaps,
    strict: bool,
    mut parts: impl FnMut(NodeSet, usize) -> Option<Vec<NodeSet>>,
) -> Result<Projection> {
    check_size(space)?;
    let mut logs: BTreeMap<NodeSet, Vec<Vec<f64>>> = BTreeMap::new();
    for (&set, map) in base {
        logs.insert(set, positive_logs(map, strict)?);
    }
    let d0 = space.output_size();
    let mut degenerate = Vec::new();
    let mut maps = Vec::with_capacity(1 << space.n());
    for c in NodeSet::all(space.n()) {
        let mut rows = Vec::with_capacity(space.sub_size(c));
        for xc in 0..space.sub_size(c) {
            match parts(c, xc) {
                None => {
                    let own = base.get(&c).ok_or(Error::MissingBase(c))?;
                    rows.push(own.row(xc).to_vec());
                }
                Some(sets) => {
                    let mut mean = vec![0.0; d0];
                    for b in &sets {
                        let table = logs.get(b).ok_or(Error::MissingBase(*b))?;
                        let row = &table[space.restrict_sub_index(c, xc, *b)];
                        for (s, v) in mean.iter_mut().zip(row) {
                            *s += v / sets.len() as f64;
                        }
                    }
                    match softmax(&mean) {
                        Some(r) => rows.push(r),
                        None => {
                            degenerate.push((c, xc));
                            rows.push(vec![1.0 / d0 as f64; d0]);
                        }
                    }
                }
            }
        }
        maps.push(StochasticMap::new(space, c, rows)?);
    }
    Ok(Projection { modalities: FunctionalModalities::new(space, maps)?, degenerate })
}

fn k_parts(k: usize) -> impl FnMut(NodeSet, usize) -> Option<Vec<NodeSet>> {
    move |c, _| (c.len() > k).then(|| c.subsets().filter(|b| b.len() == k).collect())
}

/// The member of `M̃_{k+1}` with the given base maps `κ_B`, `|B| ≤ k`:
/// `κ_C ∝ (∏_{B ⊆ C, |B| = k} κ_B)^{1/binom(|C|,k)}` for `|C| > k`.
pub fn geometric_mean_extension_k(
    space: &StateSpace,
    base: &BaseMaps,
    k: usize,
) -> Result<FunctionalModalities<f64>> {
    if k > space.n() {
        return Err(Error::InvalidK { k, n: space.n() });
    }
    Ok(assemble(space, base, true, k_parts(k))?.modalities)
}

/// Keeps `κ_A` for `|A| ≤ k` and replaces every larger member by the
/// geometric mean of the `k`-subsets. Zero entries are allowed.
pub fn project_to_tilde_k(modalities: &FunctionalModalities<f64>, k: usize) -> Result<Projection> {
    let space = modalities.space();
    if k > space.n() {
        return Err(Error::InvalidK { k, n: space.n() });
    }
    let base = base_maps(modalities, |a| a.len() <= k);
    assemble(space, &base, false, k_parts(k))
}

/// Sets `R ⊆ C` with `(R, x_C|_R)` in the specification and no proper subset
/// `R' ⊊ R` with `(R', x_C|_{R'})` in it.
fn minimal_sets_within(spec: &RobustnessSpec, c: NodeSet, xc: usize) -> Vec<NodeSet> {
    let space = spec.space();
    let member = |r: NodeSet| spec.contains_sub_index(r, space.restrict_sub_index(c, xc, r));
    let candidates: Vec<NodeSet> = c.subsets().filter(|&r| member(r)).collect();
    candidates
        .iter()
        .copied()
        .filter(|r| !candidates.iter().any(|o| o.is_proper_subset(*r)))
        .collect()
}

fn general_parts(spec: &RobustnessSpec) -> impl FnMut(NodeSet, usize) -> Option<Vec<NodeSet>> + '_ {
    move |c, xc| {
        let sets = minimal_sets_within(spec, c, xc);
        (!sets.is_empty() && sets != [c]).then_some(sets)
    }
}

fn require_coherent_saturated(spec: &RobustnessSpec) -> Result<()> {
    if !spec.is_coherent() {
        return Err(Error::NotCoherent);
    }
    if !spec.is_saturated() {
        return Err(Error::NotSaturated);
    }
    Ok(())
}

/// The member of `M̃_R`: `κ_C(x_C) ∝ (∏_{R ∈ R^min_x(C)} κ_R(x|_R))^{1/|R^min_x(C)|}`
/// where `R^min_x(C)` are the minimal sets of the specification inside `C`.
/// Members with no minimal set inside keep their base value.
pub fn geometric_mean_extension_general(
    spec: &RobustnessSpec,
    base: &BaseMaps,
) -> Result<FunctionalModalities<f64>> {
    require_coherent_saturated(spec)?;
    Ok(assemble(spec.space(), base, true, general_parts(spec))?.modalities)
}

/// Replaces every member that contains a minimal set by the geometric mean
/// of those minimal sets. Zero entries are allowed.
pub fn project_to_tilde_r(modalities: &FunctionalModalities<f64>, spec: &RobustnessSpec) -> Result<Projection> {
    if !spec.is_coherent() {
        return Err(Error::NotCoherent);
    }
    let base = base_maps(modalities, |_| true);
    assemble(spec.space(), &base, false, general_parts(spec))
}

/// Largest absolute centered interaction term of a table `[x_A][x_0]`, for
/// every `C ⊆ A`. Each `x_0` slice is split into reference-point components
/// `g_C(x_C) = Σ_{D ⊆ C} (−1)^{|C∖D|} f(x_D, 0_{A∖D})`, then the
/// `x_0`-average is removed.
fn centered_interactions(space: &StateSpace, a: NodeSet, table: &[Vec<f64>]) -> Vec<(NodeSet, f64)> {
    let d0 = space.output_size();
    let mut out = Vec::new();
    for c in a.subsets() {
        let mut worst = 0.0f64;
        for xc in 0..space.sub_size(c) {
            let values = space.sub_values(c, xc);
            let mut comp = vec![0.0; d0];
            for d in c.subsets() {
                let sign = if (c.len() - d.len()) % 2 == 0 { 1.0 } else { -1.0 };
                let coords: Vec<usize> = a
                    .nodes()
                    .map(|node| {
                        if d.contains(node) {
                            values[c.nodes().position(|m| m == node).unwrap()]
                        } else {
                            0
                        }
                    })
                    .collect();
                let row = &table[space.sub_index(a, &coords)];
                for (s, v) in comp.iter_mut().zip(row) {
                    *s += sign * v;
                }
            }
            let mean = comp.iter().sum::<f64>() / d0 as f64;
            worst = comp.iter().fold(worst, |m, v| m.max((v - mean).abs()));
        }
        out.push((c, worst));
    }
    out
}

fn table_scale(table: &[Vec<f64>]) -> f64 {
    1.0 + table.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Smallest `m` such that `ln κ(x; x_0)` is a sum of functions of at most
/// `m` inputs (each also depending on `x_0`) plus a function of `x` alone.
pub fn interaction_order(kappa: &StochasticMap<f64>, tol: f64) -> Result<usize> {
    let space = kappa.space();
    check_size(space)?;
    let full = space.full_set();
    if kappa.domain() != full {
        return Err(Error::Shape(format!("expected a map on all inputs, got domain {}", kappa.domain())));
    }
    let logs = ln_table(kappa)?;
    let bound = tol * table_scale(&logs) * (1u64 << space.n()) as f64;
    Ok(centered_interactions(space, full, &logs)
        .into_iter()
        .filter(|&(_, v)| v > bound)
        .map(|(c, _)| c.len())
        .max()
        .unwrap_or(0))
}

/// Necessary condition for membership in `M_Δ`: every Möbius potential has
/// no centered interaction term on a set outside `Δ`.
pub fn delta_interaction_check(
    modalities: &FunctionalModalities<f64>,
    spec: &RobustnessSpec,
    tol: f64,
) -> Result<bool> {
    require_coherent_saturated(spec)?;
    let delta = spec.delta_family()?;
    Ok(delta_violation(modalities, &delta, tol)?.is_none())
}

/// A pair `(A, C)` with `C ∉ Δ` carrying a nonzero centered term of `φ_A`.
pub fn delta_violation(
    modalities: &FunctionalModalities<f64>,
    delta: &DeltaFamily,
    tol: f64,
) -> Result<Option<(NodeSet, NodeSet)>> {
    let potentials = moebius_potentials(modalities)?;
    let space = modalities.space();
    for a in NodeSet::all(space.n()).filter(|a| !delta.contains(*a)) {
        let table = potentials.get(a);
        let bound = tol * table_scale(table) * (1u64 << a.len()) as f64;
        for (c, v) in centered_interactions(space, a, table) {
            if !delta.contains(c) && v > bound {
                return Ok(Some((a, c)));
            }
        }
    }
    Ok(None)
}

/// The canonical coefficients `α_{A,B}` for the `(k+1)`-interaction family:
/// `(−1)^{|A|−|B|}` for `|B| < k` and `(−1)^{|A|−k}·k/|A|` for `|B| = k`.
pub fn canonical_alpha(a_len: usize, b_len: usize, k: usize) -> f64 {
    assert!(b_len <= k && b_len <= a_len);
    let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    if b_len < k {
        sign(a_len - b_len)
    } else if a_len == 0 {
        1.0
    } else {
        sign(a_len - k) * k as f64 / a_len as f64
    }
}

/// Checks the consistency conditions between coefficients of different `A`:
/// `(−1)^{|A|} α_{A,B}` independent of `A` for `|B| < k`, and
/// `(−1)^{|A|} |A| α_{A,B}` independent of `A` for `|B| = k`.
pub fn alpha_conditions_hold(n: usize, k: usize, alpha: impl Fn(usize, usize) -> f64) -> bool {
    let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    (0..=k.min(n)).all(|b| {
        let key = |a: usize| {
            if b < k {
                sign(a) * alpha(a, b)
            } else {
                sign(a) * a as f64 * alpha(a, b)
            }
        };
        let first = if b == k && b == 0 { 1 } else { b };
        (first..=n).all(|a| (key(a) - key(first)).abs() <= 1e-12)
    })
}

/// Functions `Ψ_B` for `|B| ≤ k` together with coefficients `α_{A,B}`,
/// giving potentials `φ_A = Σ_{B ⊆ A, |B| ≤ k} α_{A,B} Ψ_B(x_A|_B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InteractionBasis {
    space: StateSpace,
    k: usize,
    psi: BTreeMap<NodeSet, Vec<Vec<f64>>>,
}

impl InteractionBasis {
    /// `Ψ_B = ln κ_B` for `|B| ≤ k`, paired with [`canonical_alpha`].
    pub fn from_base(space: &StateSpace, base: &BaseMaps, k: usize) -> Result<Self> {
        check_size(space)?;
        let mut psi = BTreeMap::new();
        for b in NodeSet::all(space.n()).filter(|b| b.len() <= k) {
            let map = base.get(&b).ok_or(Error::MissingBase(b))?;
            psi.insert(b, ln_table(map)?);
        }
        Ok(InteractionBasis { space: space.clone(), k, psi })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn psi(&self, set: NodeSet) -> Option<&[Vec<f64>]> {
        self.psi.get(&set).map(|t| t.as_slice())
    }

    pub fn to_potentials(&self) -> GibbsPotentials {
        let space = &self.space;
        let d0 = space.output_size();
        let tables = NodeSet::all(space.n())
            .map(|a| {
                (0..space.sub_size(a))
                    .map(|xa| {
                        let mut acc = vec![0.0; d0];
                        for (b, table) in self.psi.iter().filter(|(b, _)| b.is_subset(a)) {
                            let w = canonical_alpha(a.len(), b.len(), self.k);
                            let row = &table[space.restrict_sub_index(a, xa, *b)];
                            for (s, v) in acc.iter_mut().zip(row) {
                                *s += w * v;
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        GibbsPotentials { space: space.clone(), tables }
    }
}

/// Maximum absolute difference between two families.
pub fn max_deviation(a: &FunctionalModalities<f64>, b: &FunctionalModalities<f64>) -> f64 {
    a.maps()
        .iter()
        .zip(b.maps())
        .flat_map(|(m, o)| m.rows().iter().flatten().zip(o.rows().iter().flatten()))
        .fold(0.0, |acc, (u, v)| acc.max((u - v).abs()))
}

/// Whether a family is a fixed point of the `M̃_{k+1}` projection.
pub fn is_in_tilde_k(modalities: &FunctionalModalities<f64>, k: usize, tol: f64) -> Result<bool> {
    let p = project_to_tilde_k(modalities, k)?;
    Ok(p.degenerate.is_empty() && max_deviation(&p.modalities, modalities) <= tol)
}
