//! Robustness graphs `G_{R,S}`, their connected components (robustness
//! structures), maximality, and the combinatorial analyses built on them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::robustness::{Assignments, RobustnessSpec};
use crate::space::{NodeSet, StateSpace};

/// Largest `|X_in|` accepted by exhaustive structure enumeration.
pub const ENUMERATION_LIMIT: usize = 24;

/// Largest `d^n` accepted by [`max_singleton_code_size`].
pub const CODE_SPACE_LIMIT: usize = 1 << 20;

/// The induced subgraph `G_{R,S}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RobustnessGraph {
    pub space: StateSpace,
    /// Sorted state indices of `S`.
    pub vertices: Vec<usize>,
    /// Edges `(x, y)` with `x < y`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl RobustnessGraph {
    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, x: usize) -> usize {
        self.neighbors(x).count()
    }
}

/// Whether `x` and `y` are joined in `G_R`: some `(R, x|_R) ∈ spec` with `x|_R = y|_R`.
pub fn adjacent(spec: &RobustnessSpec, x: usize, y: usize) -> bool {
    if x == y {
        return false;
    }
    let agree = spec.space().agreement(x, y);
    spec.groups().any(|(set, assign)| {
        set.is_subset(agree)
            && match assign {
                Assignments::All => true,
                Assignments::Some(_) => spec.contains_state(set, x),
            }
    })
}

/// Edge criterion for `R_k` with equal alphabets: `Hamming(x, y) ≤ n − k`.
pub fn rk_adjacent(space: &StateSpace, k: usize, x: usize, y: usize) -> bool {
    x != y && space.hamming(x, y) + k <= space.n()
}

fn sorted_vertices(space: &StateSpace, set: &[usize]) -> Result<Vec<usize>> {
    for &x in set {
        space.check_state(x)?;
    }
    let v: BTreeSet<usize> = set.iter().copied().collect();
    Ok(v.into_iter().collect())
}

/// Builds `G_{R,S}` with its explicit edge list.
pub fn build_graph(spec: &RobustnessSpec, set: &[usize]) -> Result<RobustnessGraph> {
    let vertices = sorted_vertices(spec.space(), set)?;
    let mut edges = Vec::new();
    for (i, &x) in vertices.iter().enumerate() {
        for &y in &vertices[i + 1..] {
            if adjacent(spec, x, y) {
                edges.push((x, y));
            }
        }
    }
    Ok(RobustnessGraph { space: spec.space().clone(), vertices, edges })
}

/// A family of pairwise disjoint nonempty sets of input states, kept in
/// canonical order: each block sorted, blocks sorted by their smallest state.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct RobustnessStructure {
    num_states: usize,
    blocks: Vec<Vec<usize>>,
}

impl RobustnessStructure {
    pub fn new(num_states: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; num_states];
        let mut canon = Vec::with_capacity(blocks.len());
        for mut block in blocks {
            if block.is_empty() {
                return Err(Error::Shape("empty block".into()));
            }
            block.sort_unstable();
            for &x in &block {
                if x >= num_states {
                    return Err(Error::InvalidState { index: x, size: num_states });
                }
                if seen[x] {
                    return Err(Error::Shape(format!("state {x} occurs in two blocks")));
                }
                seen[x] = true;
            }
            canon.push(block);
        }
        canon.sort();
        Ok(RobustnessStructure { num_states, blocks: canon })
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `∪B`, sorted.
    pub fn union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.blocks.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    /// The map `f_B`: block id of each state of `∪B`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    /// Dense lookup table for `f_B` over all of `X_in`.
    pub fn labeling(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.num_states];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x] = Some(i);
            }
        }
        out
    }
}

/// Connected components of `G_{R,S}`, computed from cylinder classes without
/// materializing the edge set.
pub fn components_of(spec: &RobustnessSpec, set: &[usize]) -> Result<RobustnessStructure> {
    let space = spec.space();
    let vertices = sorted_vertices(space, set)?;
    let mut uf = UnionFind::<usize>::new(vertices.len());
    for (group, _) in spec.groups() {
        let mut first: std::collections::HashMap<usize, usize> = Default::default();
        for (i, &x) in vertices.iter().enumerate() {
            let key = space.restrict_index(x, group);
            if !spec.contains_sub_index(group, key) {
                continue;
            }
            match first.get(&key) {
                Some(&j) => {
                    uf.union(i, j);
                }
                None => {
                    first.insert(key, i);
                }
            }
        }
    }
    let labels = uf.into_labeling();
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &x) in vertices.iter().enumerate() {
        blocks.entry(labels[i]).or_default().push(x);
    }
    RobustnessStructure::new(space.input_size(), blocks.into_values().collect())
}

/// Connected components of an explicit graph.
pub fn connected_components(graph: &RobustnessGraph) -> RobustnessStructure {
    let pos = |x: usize| graph.vertices.binary_search(&x).expect("edge endpoint is a vertex");
    let mut uf = UnionFind::<usize>::new(graph.vertices.len());
    for &(a, b) in &graph.edges {
        uf.union(pos(a), pos(b));
    }
    let labels = uf.into_labeling();
    let mut blocks: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &x) in graph.vertices.iter().enumerate() {
        blocks.entry(labels[i]).or_default().push(x);
    }
    RobustnessStructure::new(graph.space.input_size(), blocks.into_values().collect())
        .expect("components are disjoint")
}

/// Both definitional maximality conditions, in the order (component counting, neighbour pairs).
pub fn maximality_conditions(
    structure: &RobustnessStructure,
    spec: &RobustnessSpec,
) -> Result<(bool, bool)> {
    let union = structure.union();
    let recomputed = components_of(spec, &union)?;
    if recomputed != *structure || structure.num_states() != spec.space().input_size() {
        return Err(Error::InconsistentStructure);
    }
    let labels = structure.labeling();
    let mut by_count = true;
    let mut by_edges = true;
    for x in 0..structure.num_states() {
        if labels[x].is_some() {
            continue;
        }
        let mut extended = union.clone();
        extended.push(x);
        if components_of(spec, &extended)?.len() >= structure.len() {
            by_count = false;
        }
        let touched: BTreeSet<usize> =
            union.iter().filter(|&&y| adjacent(spec, x, y)).filter_map(|&y| labels[y]).collect();
        if touched.len() < 2 {
            by_edges = false;
        }
    }
    Ok((by_count, by_edges))
}

/// Whether adding any state outside `∪B` would merge components.
pub fn is_maximal(structure: &RobustnessStructure, spec: &RobustnessSpec) -> Result<bool> {
    let (by_count, by_edges) = maximality_conditions(structure, spec)?;
    debug_assert_eq!(by_count, by_edges, "maximality conditions disagree");
    Ok(by_count)
}

/// Neighbourhood bitmasks of `G_R` for state spaces of at most 64 states.
#[derive(Clone, Debug)]
pub(crate) struct BitGraph {
    nbr: Vec<u64>,
}

impl BitGraph {
    pub(crate) fn new(spec: &RobustnessSpec) -> Self {
        let size = spec.space().input_size();
        assert!(size <= 64);
        let mut nbr = vec![0u64; size];
        for x in 0..size {
            for y in x + 1..size {
                if adjacent(spec, x, y) {
                    nbr[x] |= 1 << y;
                    nbr[y] |= 1 << x;
                }
            }
        }
        BitGraph { nbr }
    }

    pub(crate) fn components(&self, set: u64) -> Vec<u64> {
        let mut rest = set;
        let mut out = Vec::new();
        while rest != 0 {
            let start = rest & rest.wrapping_neg();
            let mut comp = start;
            let mut frontier = start;
            while frontier != 0 {
                let u = frontier.trailing_zeros() as usize;
                frontier &= frontier - 1;
                let new = self.nbr[u] & set & !comp;
                comp |= new;
                frontier |= new;
            }
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    /// Component count after adding each outside state drops for every such state.
    pub(crate) fn is_maximal(&self, set: u64, comps: &[u64], size: usize) -> bool {
        (0..size).filter(|&x| set & (1 << x) == 0).all(|x| {
            let touched = comps.iter().filter(|&&c| self.nbr[x] & c != 0).count();
            // components(S ∪ {x}) = components(S) + 1 − touched
            touched >= 2
        })
    }
}

fn mask_to_structure(size: usize, comps: &[u64]) -> RobustnessStructure {
    let blocks = comps
        .iter()
        .map(|&c| (0..size).filter(|&i| c & (1 << i) != 0).collect())
        .collect();
    RobustnessStructure::new(size, blocks).expect("components are disjoint")
}

fn sorted_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask & (1 << i) != 0).collect()
}

/// Options for [`enumerate_maximal_structures_with`].
#[derive(Clone, Debug, Default)]
pub struct EnumerateOptions {
    pub limit: Option<usize>,
    /// Keep only the canonical representative of each automorphism class of `∪B`.
    pub up_to_symmetry: bool,
}

/// All maximal robustness structures, ordered by `|∪B|` and then
/// lexicographically by the sorted states of `∪B`.
pub fn enumerate_maximal_structures(
    spec: &RobustnessSpec,
    limit: Option<usize>,
) -> Result<Vec<RobustnessStructure>> {
    enumerate_maximal_structures_with(spec, &EnumerateOptions { limit, up_to_symmetry: false })
}

pub fn enumerate_maximal_structures_with(
    spec: &RobustnessSpec,
    opts: &EnumerateOptions,
) -> Result<Vec<RobustnessStructure>> {
    let size = spec.space().input_size();
    if size > ENUMERATION_LIMIT {
        return Err(Error::StateSpaceTooLarge { size, limit: ENUMERATION_LIMIT });
    }
    let graph = BitGraph::new(spec);
    let autos = if opts.up_to_symmetry { Some(automorphisms(spec.space())?) } else { None };
    let mut found: Vec<(usize, Vec<usize>, RobustnessStructure)> = Vec::new();
    for set in 1u64..(1u64 << size) {
        let comps = graph.components(set);
        if !graph.is_maximal(set, &comps, size) {
            continue;
        }
        let members = sorted_indices(set);
        if let Some(autos) = &autos {
            if canonical_form(&members, autos) != members {
                continue;
            }
        }
        found.push((members.len(), members, mask_to_structure(size, &comps)));
    }
    found.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    let limit = opts.limit.unwrap_or(usize::MAX);
    Ok(found.into_iter().take(limit).map(|(_, _, s)| s).collect())
}

/// Every robustness structure, one per nonempty `S ⊆ X_in`, in the same order
/// as [`enumerate_maximal_structures`].
pub fn enumerate_structures(spec: &RobustnessSpec) -> Result<Vec<RobustnessStructure>> {
    let size = spec.space().input_size();
    if size > 20 {
        return Err(Error::StateSpaceTooLarge { size, limit: 20 });
    }
    let graph = BitGraph::new(spec);
    let mut found: Vec<(usize, Vec<usize>, RobustnessStructure)> = (1u64..(1u64 << size))
        .map(|set| {
            let members = sorted_indices(set);
            (members.len(), members, mask_to_structure(size, &graph.components(set)))
        })
        .collect();
    found.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    Ok(found.into_iter().map(|(_, _, s)| s).collect())
}

/// A maximal structure grown greedily: states are visited in random order and
/// kept whenever they would not merge two existing components. Blocks never
/// merge, so a rejected state stays rejected and a single pass suffices.
pub fn random_maximal_structure<R: Rng + ?Sized>(
    spec: &RobustnessSpec,
    rng: &mut R,
) -> RobustnessStructure {
    let size = spec.space().input_size();
    let adj: Vec<Vec<usize>> =
        (0..size).map(|x| (0..size).filter(|&y| adjacent(spec, x, y)).collect()).collect();
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    let mut label: Vec<Option<usize>> = vec![None; size];
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for x in order {
        let touched: BTreeSet<usize> = adj[x].iter().filter_map(|&y| label[y]).collect();
        match touched.len() {
            0 => {
                label[x] = Some(blocks.len());
                blocks.push(vec![x]);
            }
            1 => {
                let b = *touched.iter().next().unwrap();
                label[x] = Some(b);
                blocks[b].push(x);
            }
            _ => {}
        }
    }
    RobustnessStructure::new(size, blocks).expect("blocks are disjoint")
}

/// `|Y_R| + |X_R \ Y_R|·|X_S|` with `S = [n] \ R`: an upper bound on the
/// number of blocks of any robustness structure.
pub fn structure_size_bound(spec: &RobustnessSpec, set: NodeSet) -> Result<usize> {
    let space = spec.space();
    space.check_set(set)?;
    let covered = spec.assignments_on(set).len();
    let rest = space.full_set().minus(set);
    Ok(covered + (space.sub_size(set) - covered) * space.sub_size(rest))
}

/// Whether a block equals the product of its coordinate projections.
pub fn block_is_product(space: &StateSpace, block: &[usize]) -> bool {
    let proj = projections(space, block);
    let product: usize = proj.iter().map(|p| p.len()).product();
    product == block.len()
}

fn projections(space: &StateSpace, block: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut proj = vec![BTreeSet::new(); space.n()];
    for &x in block {
        for (i, v) in space.coords_of(x).into_iter().enumerate() {
            proj[i].insert(v);
        }
    }
    proj
}

/// Every block is a product `S_1 × … × S_n` and the projections cover every axis.
pub fn check_product_structure(space: &StateSpace, structure: &RobustnessStructure) -> bool {
    if !structure.blocks().iter().all(|b| block_is_product(space, b)) {
        return false;
    }
    let mut covered = vec![BTreeSet::new(); space.n()];
    for b in structure.blocks() {
        for (i, p) in projections(space, b).into_iter().enumerate() {
            covered[i].extend(p);
        }
    }
    covered.iter().enumerate().all(|(i, c)| c.len() == space.card(i + 1))
}

fn set_partitions(d: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, d: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == d {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, d, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, d, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, d, &mut Vec::new(), &mut out);
    out
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

/// Maximal 1-robustness structures of two inputs, built directly from the
/// product form: blocks `S_1 × S_2` whose sides partition `X_1` and `X_2`,
/// i.e. collections of complete bipartite graphs covering both vertex classes.
pub fn fink_maximal_structures(d1: usize, d2: usize) -> Result<Vec<RobustnessStructure>> {
    if d1 == 0 || d2 == 0 {
        return Err(Error::InvalidCardinality(vec![d1, d2]));
    }
    if d1 > 8 || d2 > 8 {
        return Err(Error::StateSpaceTooLarge { size: d1 * d2, limit: 64 });
    }
    let left = set_partitions(d1);
    let right = set_partitions(d2);
    let mut out = BTreeSet::new();
    for p in &left {
        for q in right.iter().filter(|q| q.len() == p.len()) {
            for perm in permutations(p.len()) {
                let blocks = p
                    .iter()
                    .zip(&perm)
                    .map(|(s1, &j)| {
                        s1.iter().flat_map(|&a| q[j].iter().map(move |&b| a * d2 + b)).collect()
                    })
                    .collect();
                out.insert(RobustnessStructure::new(d1 * d2, blocks)?);
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Whether every block is connected in `G_{R_s}` for all `s ≤ n − 2k + 1`
/// (binary inputs only).
pub fn smallk_connectivity_check(
    space: &StateSpace,
    structure: &RobustnessStructure,
    k: usize,
) -> Result<bool> {
    if !space.is_binary() {
        return Err(Error::NotBinary);
    }
    let n = space.n();
    if n + 1 < 2 * k {
        return Ok(true);
    }
    let s_max = (n + 1 - 2 * k).min(n);
    for s in 0..=s_max {
        for block in structure.blocks() {
            if !block_connected_rk(space, block, s) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether a set of states induces a connected subgraph of `G_{R_s}`.
pub fn block_connected_rk(space: &StateSpace, block: &[usize], s: usize) -> bool {
    if block.is_empty() {
        return true;
    }
    let mut seen = vec![false; block.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..block.len() {
            if !seen[j] && rk_adjacent(space, s, block[i], block[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// `A_d(n, n − k + 1)`: the largest set of words with pairwise Hamming
/// distance at least `n − k + 1`, i.e. the largest structure of `R_k` whose
/// blocks are all singletons. Exact branch and bound.
pub fn max_singleton_code_size(n: usize, k: usize, d: usize) -> Result<usize> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidCardinality(vec![d, n]));
    }
    if k > n {
        return Err(Error::InvalidK { k, n });
    }
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > CODE_SPACE_LIMIT as u128 {
        return Err(Error::StateSpaceTooLarge {
            size: size.min(usize::MAX as u128) as usize,
            limit: CODE_SPACE_LIMIT,
        });
    }
    let size = size as usize;
    let dist = n - k + 1;
    if dist <= 1 {
        return Ok(size);
    }
    let words: Vec<Vec<u8>> = (0..size)
        .map(|mut x| {
            let mut w = vec![0u8; n];
            for slot in w.iter_mut().rev() {
                *slot = (x % d) as u8;
                x /= d;
            }
            w
        })
        .collect();
    let far = |a: usize, b: usize| {
        words[a].iter().zip(&words[b]).filter(|(x, y)| x != y).count() >= dist
    };
    // The Hamming space is vertex transitive, so some optimal code contains word 0.
    let candidates: Vec<usize> = (1..size).filter(|&y| far(0, y)).collect();
    let mut best = 0usize;
    clique_search(&candidates, &far, 0, &mut best);
    Ok(best + 1)
}

fn clique_search(cands: &[usize], far: &dyn Fn(usize, usize) -> bool, depth: usize, best: &mut usize) {
    if cands.is_empty() {
        *best = (*best).max(depth);
        return;
    }
    // greedy colouring bound
    let mut colors: Vec<Vec<usize>> = Vec::new();
    let mut color_of = Vec::with_capacity(cands.len());
    for &v in cands {
        let c = colors.iter().position(|cls| cls.iter().all(|&u| far(u, v)).then_some(()).is_none());
        let c = match c {
            Some(c) => c,
            None => {
                colors.push(Vec::new());
                colors.len() - 1
            }
        };
        colors[c].push(v);
        color_of.push(c + 1);
    }
    // process vertices in decreasing colour order
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(color_of[i]));
    let mut remaining: Vec<usize> = cands.to_vec();
    for &i in &order {
        if depth + color_of[i] <= *best {
            return;
        }
        let v = cands[i];
        remaining.retain(|&u| u != v);
        let next: Vec<usize> = remaining.iter().copied().filter(|&u| far(u, v)).collect();
        clique_search(&next, far, depth + 1, best);
    }
}

/// Automorphisms of `X_in` for equal alphabets: permutations of the nodes
/// combined with independent value permutations on every node.
pub fn automorphisms(space: &StateSpace) -> Result<Vec<Vec<usize>>> {
    let d = space.equal_alphabets().ok_or(Error::UnequalAlphabets)?;
    let n = space.n();
    if n > 6 || d > 4 {
        return Err(Error::StateSpaceTooLarge { size: space.input_size(), limit: 4096 });
    }
    let node_perms = permutations(n);
    let value_perms = permutations(d);
    let mut out = Vec::new();
    let combos = value_perms.len().pow(n as u32);
    for np in &node_perms {
        for mut c in 0..combos {
            let mut vp = Vec::with_capacity(n);
            for _ in 0..n {
                vp.push(&value_perms[c % value_perms.len()]);
                c /= value_perms.len();
            }
            let map: Vec<usize> = (0..space.input_size())
                .map(|x| {
                    let coords = space.coords_of(x);
                    let mut image = vec![0; n];
                    for i in 0..n {
                        image[np[i]] = vp[i][coords[i]];
                    }
                    space.sub_index(space.full_set(), &image)
                })
                .collect();
            out.push(map);
        }
    }
    Ok(out)
}

/// Lexicographically smallest sorted image of a set under the given automorphisms.
pub fn canonical_form(set: &[usize], autos: &[Vec<usize>]) -> Vec<usize> {
    autos
        .iter()
        .map(|map| {
            let mut image: Vec<usize> = set.iter().map(|&x| map[x]).collect();
            image.sort_unstable();
            image
        })
        .min()
        .unwrap_or_else(|| set.to_vec())
}

const PALETTE: [&str; 8] =
    ["forestgreen", "maroon", "navy", "darkorange", "purple", "teal", "goldenrod", "gray40"];

fn state_label(space: &StateSpace, x: usize) -> String {
    let coords: Vec<String> = space.coords_of(x).iter().map(|v| v.to_string()).collect();
    format!("({})", coords.join(","))
}

/// Graphviz DOT text for a graph, with the blocks of `structure` drawn as
/// coloured clusters. Output is deterministic.
pub fn export_dot(graph: &RobustnessGraph, structure: Option<&RobustnessStructure>) -> String {
    let mut out = String::from("graph G {\n");
    let space = &graph.space;
    let mut clustered = BTreeSet::new();
    if let Some(st) = structure {
        for (i, block) in st.blocks().iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let _ = writeln!(out, "  subgraph cluster_{i} {{");
            let _ = writeln!(out, "    label=\"B{i}\";");
            let _ = writeln!(out, "    color={color};");
            for &x in block {
                let _ = writeln!(out, "    s{x} [label=\"{}\", color={color}];", state_label(space, x));
                clustered.insert(x);
            }
            let _ = writeln!(out, "  }}");
        }
    }
    for &x in &graph.vertices {
        if !clustered.contains(&x) {
            let _ = writeln!(out, "  s{x} [label=\"{}\"];", state_label(space, x));
        }
    }
    for &(a, b) in &graph.edges {
        let _ = writeln!(out, "  s{a} -- s{b};");
    }
    out.push_str("}\n");
    out
}
