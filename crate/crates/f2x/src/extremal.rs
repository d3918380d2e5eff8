//! Ground-truth extremal sets: the largest `A` inside the box `G_N` whose
//! difference set avoids `{r + 1 : r prime}` (char 2: differences are XORs,
//! and `r - 1 = r + 1`).
//!
//! The instance is a Cayley graph on `(F_2^N, xor)` with the shifted primes
//! as connection set; the answer is its independence number. Clique-cover
//! bounds alone cannot certify it (the graph has clique number 4 but
//! independence ratio far below 1/4), so the exact solver first shrinks the
//! instance by exact Cayley reductions — parity functionals that see zero
//! or one connection elements split or fuse the graph into a half-size
//! instance of the same shape — and only then runs a branch-and-bound on
//! whatever small core remains. The heuristic is a seeded multi-restart
//! greedy with (1,2)-swap local search, for boxes too large to certify.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::primes_up_to;
use crate::poly::{Degree, Poly2};
use crate::{Error, Result};

/// Largest box exponent the exact solver accepts.
pub const EXACT_LIMIT: u32 = 12;
/// Largest box exponent the heuristic accepts.
pub const HEURISTIC_LIMIT: u32 = 20;

/// `{r + 1 : r prime, deg r < n}`, sorted. Every element is nonzero: the
/// smallest prime is x, and x + 1 maps to the nonzero x (and vice versa).
pub fn forbidden_set(n: u32) -> Vec<Poly2> {
    assert!(n >= 1, "box exponent must be at least 1");
    let mut out: Vec<Poly2> = if n == 1 {
        Vec::new()
    } else {
        primes_up_to(n - 1)
            .iter()
            .map(|r| r.add(&Poly2::one()))
            .collect()
    };
    out.sort();
    out
}

/// True iff `a` has no pairwise difference in [`forbidden_set`]. Errors if
/// any element lies outside the box.
pub fn verify_avoiding(a: &[Poly2], n: u32) -> Result<bool> {
    for f in a {
        if f.deg() >= Degree::Finite(n as i64) {
            return Err(Error::OutsideGn {
                element: f.clone(),
                n,
            });
        }
    }
    let forbidden = conn_bits(1 << n, &generator_bits(n));
    for (i, f) in a.iter().enumerate() {
        for g in &a[i + 1..] {
            if forbidden.contains(f.add(g).bits_u64() as usize) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn generator_bits(n: u32) -> Vec<usize> {
    forbidden_set(n)
        .iter()
        .map(|f| f.bits_u64() as usize)
        .collect()
}

fn conn_bits(size: usize, conn: &[usize]) -> FixedBitSet {
    let mut bits = FixedBitSet::with_capacity(size);
    for &s in conn {
        bits.insert(s);
    }
    bits
}

/// How to search for the extremal set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Certified maximum (reductions plus branch-and-bound).
    Exact,
    /// Seeded multi-restart greedy; a valid witness, not a certificate.
    Heuristic { seed: u64 },
}

/// An avoiding set and its size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremal {
    pub size: u64,
    pub witness: Vec<Poly2>,
}

/// The largest avoiding subset of the box (exact), or the best one found
/// (heuristic). Witnesses are sorted and always verify.
pub fn max_avoiding_set(n: u32, mode: SearchMode) -> Result<Extremal> {
    assert!(n >= 1, "box exponent must be at least 1");
    let limit = match mode {
        SearchMode::Exact => EXACT_LIMIT,
        SearchMode::Heuristic { .. } => HEURISTIC_LIMIT,
    };
    if n > limit {
        return Err(Error::CostGuard {
            what: match mode {
                SearchMode::Exact => "max_avoiding_set exact",
                SearchMode::Heuristic { .. } => "max_avoiding_set heuristic",
            },
            limit: limit as u64,
            requested: n as u64,
        });
    }
    let witness_bits = match mode {
        SearchMode::Heuristic { seed } => heuristic_core(n, &generator_bits(n), seed),
        SearchMode::Exact => solve_exact(n, &generator_bits(n)),
    };
    let mut witness: Vec<Poly2> = witness_bits
        .iter()
        .map(|&v| Poly2::from_bits(v as u64))
        .collect();
    witness.sort();
    debug_assert!(verify_avoiding(&witness, n)?);
    Ok(Extremal {
        size: witness.len() as u64,
        witness,
    })
}

// ---- Exact solver: iterated Cayley reductions, then branch-and-bound ----

fn parity(x: usize) -> u32 {
    x.count_ones() & 1
}

/// A half-size rewrite of a Cayley instance, found by scanning parity
/// functionals against the connection set.
enum Reduction {
    /// No connection element has odd parity under `l`: the graph is two
    /// disjoint copies of the kernel instance (optimum doubles).
    Split { l: usize },
    /// Two functionals whose odd connection elements lie only in the (0,1)
    /// and (1,0) classes, equally many in each, with the (1,0) side a
    /// translate of the (0,1) side by some `t` in the (1,1) class. Then
    /// `v ↦ v + t` is a twin map: classes 00/11 (and 01/10) have identical
    /// outside neighborhoods, so each pair may carry the same set and
    /// collapses to one vertex (optimum doubles). `e01` is a base point of
    /// the (0,1) class taken from the connection set.
    Fuse {
        l1: usize,
        l2: usize,
        t: usize,
        e01: usize,
    },
    /// A lone functional with a single odd connection element `sigma`: the
    /// graph is two kernel copies joined by a perfect matching, so the
    /// optimum is the best disjoint pair of kernel-independent sets. Two
    /// translates of one maximum kernel set realize twice the kernel
    /// optimum whenever some shift keeps them disjoint.
    Pair { l: usize, sigma: usize },
}

fn find_reduction(dim: u32, conn: &[usize]) -> Option<Reduction> {
    if dim == 0 {
        return None;
    }
    let size = 1usize << dim;
    let words = conn.len().div_ceil(64).max(1);
    // Parity rows: bit i of row l says conn[i] is odd under l.
    let mut rows: Vec<u64> = vec![0; size * words];
    let mut counts: Vec<u32> = vec![0; size];
    for l in 1..size {
        let row = &mut rows[l * words..(l + 1) * words];
        for (i, &s) in conn.iter().enumerate() {
            if parity(l & s) == 1 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        counts[l] = row.iter().map(|w| w.count_ones()).sum();
        if counts[l] == 0 {
            return Some(Reduction::Split { l });
        }
    }
    // Fuse scan: only equal odd-counts can pair, so bucket by count.
    let mut by_count: Vec<Vec<usize>> = vec![Vec::new(); conn.len() + 1];
    for l in 1..size {
        by_count[counts[l] as usize].push(l);
    }
    for bucket in &by_count {
        for (i, &l1) in bucket.iter().enumerate() {
            let row1 = &rows[l1 * words..(l1 + 1) * words];
            for &l2 in &bucket[i + 1..] {
                let row2 = &rows[l2 * words..(l2 + 1) * words];
                if row1.iter().zip(row2).any(|(a, b)| a & b != 0) {
                    continue;
                }
                if let Some(r) = try_align(conn, l1, l2, row1, row2, words) {
                    return Some(r);
                }
            }
        }
    }
    by_count[1].first().map(|&l| {
        let row = &rows[l * words..(l + 1) * words];
        let i = (0..conn.len()).find(|&i| row[i / 64] >> (i % 64) & 1 == 1).unwrap();
        Reduction::Pair { l, sigma: conn[i] }
    })
}

/// Check `S10 = t + S01` for some translate; any candidate has the right
/// parities automatically (odd under both functionals).
fn try_align(
    conn: &[usize],
    l1: usize,
    l2: usize,
    row1: &[u64],
    row2: &[u64],
    words: usize,
) -> Option<Reduction> {
    let _ = words;
    let pick = |row: &[u64]| -> Vec<usize> {
        conn.iter()
            .enumerate()
            .filter(|&(i, _)| row[i / 64] >> (i % 64) & 1 == 1)
            .map(|(_, &s)| s)
            .collect()
    };
    let s10 = pick(row1);
    let s01 = pick(row2);
    for &s in &s01 {
        let t = s10[0] ^ s;
        if s01.iter().all(|&a| s10.binary_search(&(a ^ t)).is_ok()) {
            return Some(Reduction::Fuse {
                l1,
                l2,
                t,
                e01: s01[0],
            });
        }
    }
    None
}

/// Echelon basis of a functional kernel (or of two), plus the positions
/// whose bits act as coordinates.
struct Kernel {
    basis: Vec<usize>,
    free: Vec<u32>,
}

impl Kernel {
    fn of_one(dim: u32, l: usize) -> (Kernel, u32) {
        let p = l.trailing_zeros();
        let mut basis = Vec::new();
        let mut free = Vec::new();
        for j in 0..dim {
            if j == p {
                continue;
            }
            let mut v = 1usize << j;
            if l >> j & 1 == 1 {
                v ^= 1 << p;
            }
            basis.push(v);
            free.push(j);
        }
        (Kernel { basis, free }, p)
    }

    fn of_two(dim: u32, l1: usize, l2: usize) -> Kernel {
        let p1 = l1.trailing_zeros();
        let l2 = if l2 >> p1 & 1 == 1 { l2 ^ l1 } else { l2 };
        let p2 = l2.trailing_zeros();
        let l1 = if l1 >> p2 & 1 == 1 { l1 ^ l2 } else { l1 };
        let mut basis = Vec::new();
        let mut free = Vec::new();
        for j in 0..dim {
            if j == p1 || j == p2 {
                continue;
            }
            let mut v = 1usize << j;
            if l1 >> j & 1 == 1 {
                v ^= 1 << p1;
            }
            if l2 >> j & 1 == 1 {
                v ^= 1 << p2;
            }
            basis.push(v);
            free.push(j);
        }
        Kernel { basis, free }
    }

    /// Coordinates of a kernel element (bits at the free positions).
    fn coords(&self, v: usize) -> usize {
        self.free
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &j)| acc | ((v >> j & 1) << i))
    }

    fn unpack(&self, coords: usize) -> usize {
        self.basis
            .iter()
            .enumerate()
            .filter(|&(i, _)| coords >> i & 1 == 1)
            .fold(0, |acc, (_, &b)| acc ^ b)
    }
}

fn solve_exact(dim: u32, conn: &[usize]) -> Vec<usize> {
    match find_reduction(dim, conn) {
        Some(Reduction::Split { l }) => {
            let (kernel, pivot) = Kernel::of_one(dim, l);
            let mut child: Vec<usize> = conn.iter().map(|&s| kernel.coords(s)).collect();
            child.sort_unstable();
            let inner = solve_exact(dim - 1, &child);
            // The two copies are translates; load the same optimum on both
            // (no cross edges at all).
            let mut out = Vec::with_capacity(inner.len() * 2);
            for &c in &inner {
                let u = kernel.unpack(c);
                out.push(u);
                out.push(u ^ (1 << pivot));
            }
            out
        }
        Some(Reduction::Fuse { l1, l2, t, e01 }) => {
            let kernel = Kernel::of_two(dim, l1, l2);
            // Child vertices: (kernel coordinates) << 1 | side. Same-side
            // conflicts are the kernel-class conflicts; cross-side ones come
            // from the (0,1)-class connection elements rebased at e01.
            let mut child = Vec::new();
            for &s in conn {
                match (parity(l1 & s), parity(l2 & s)) {
                    (0, 0) => child.push(kernel.coords(s) << 1),
                    (0, 1) => child.push(kernel.coords(s ^ e01) << 1 | 1),
                    _ => {}
                }
            }
            child.sort_unstable();
            let inner = solve_exact(dim - 1, &child);
            let mut out = Vec::with_capacity(inner.len() * 2);
            for &c in &inner {
                let u = kernel.unpack(c >> 1);
                let base = if c & 1 == 0 { u } else { u ^ e01 };
                out.push(base);
                out.push(base ^ t);
            }
            out
        }
        Some(Reduction::Pair { l, sigma }) => {
            let (kernel, _) = Kernel::of_one(dim, l);
            let mut m: Vec<usize> = conn
                .iter()
                .filter(|&&s| parity(l & s) == 0)
                .map(|&s| kernel.coords(s))
                .collect();
            m.sort_unstable();
            let a = solve_exact(dim - 1, &m);
            // A disjoint translate of the kernel optimum fills both sides;
            // one exists whenever the pair-sum set misses some shift, which
            // is automatic while the optimum is below the square-root range.
            let half = 1usize << (dim - 1);
            let mut sums = FixedBitSet::with_capacity(half);
            for (i, &p) in a.iter().enumerate() {
                for &q in &a[i..] {
                    sums.insert(p ^ q);
                }
            }
            match (0..half).find(|&c| !sums.contains(c)) {
                Some(c) => {
                    let mut out = Vec::with_capacity(a.len() * 2);
                    for &p in &a {
                        out.push(kernel.unpack(p));
                        out.push(sigma ^ kernel.unpack(p ^ c));
                    }
                    out
                }
                // Translates all collide: settle the two sides directly.
                None => Instance::new(dim, conn).solve(),
            }
        }
        None => Instance::new(dim, conn).solve(),
    }
}

// ---- Heuristic ----

/// Randomized greedy + local swaps, deterministic for a fixed seed. One
/// extra deterministic opener grows a subgroup kept entirely avoiding —
/// on this family the good sets are unions of few cosets, and the opener
/// often hits the exact optimum outright.
fn heuristic_core(dim: u32, conn: &[usize], seed: u64) -> Vec<usize> {
    let size = 1usize << dim;
    let forbidden = conn_bits(size, conn);
    // Larger boxes get fewer restarts and no swap passes; the quadratic
    // bookkeeping is what hurts, not the greedy itself.
    let restarts = if dim <= 12 {
        32
    } else if dim <= 16 {
        8
    } else {
        2
    };
    let swaps = dim <= 16;

    let mut opener = SwapState::new(size, conn, &forbidden);
    for v in span_greedy(size, &forbidden) {
        opener.add(v);
    }
    opener.improve(swaps);
    let mut best = opener.members();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..size).collect();
    for _ in 0..restarts {
        order.shuffle(&mut rng);
        let mut state = SwapState::new(size, conn, &forbidden);
        for &v in &order {
            if state.conflicts[v] == 0 && !state.in_set.contains(v) {
                state.add(v);
            }
        }
        state.improve(swaps);
        if state.count > best.len() {
            best = state.members();
        }
    }
    best.sort_unstable();
    best
}

/// Grow a subgroup `H` with `H` itself avoiding: `g` joins when the whole
/// translate `g + H` stays off the forbidden set (internal differences of
/// the doubled span are old differences or elements of `g + H`).
fn span_greedy(size: usize, forbidden: &FixedBitSet) -> Vec<usize> {
    let mut span = vec![0usize];
    let mut in_span = FixedBitSet::with_capacity(size);
    in_span.insert(0);
    for g in 1..size {
        if in_span.contains(g) {
            continue;
        }
        if span.iter().all(|&s| !forbidden.contains(g ^ s)) {
            for i in 0..span.len() {
                let v = g ^ span[i];
                span.push(v);
                in_span.insert(v);
            }
        }
    }
    span
}

const SWAP_CAND_CAP: usize = 64;

/// An avoiding set plus, for every vertex, the number of members it
/// conflicts with; `improve` runs free additions and (1,2)-swaps to a
/// local optimum.
struct SwapState<'a> {
    conn: &'a [usize],
    forbidden: &'a FixedBitSet,
    in_set: FixedBitSet,
    conflicts: Vec<u32>,
    count: usize,
}

impl<'a> SwapState<'a> {
    fn new(size: usize, conn: &'a [usize], forbidden: &'a FixedBitSet) -> Self {
        SwapState {
            conn,
            forbidden,
            in_set: FixedBitSet::with_capacity(size),
            conflicts: vec![0; size],
            count: 0,
        }
    }

    fn add(&mut self, v: usize) {
        debug_assert!(!self.in_set.contains(v) && self.conflicts[v] == 0);
        self.in_set.insert(v);
        self.count += 1;
        for &g in self.conn {
            self.conflicts[v ^ g] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.in_set.set(v, false);
        self.count -= 1;
        for &g in self.conn {
            self.conflicts[v ^ g] -= 1;
        }
    }

    fn improve(&mut self, swaps: bool) {
        loop {
            let mut changed = self.additions();
            if swaps {
                changed |= self.swap_pass();
            }
            if !changed {
                break;
            }
        }
    }

    /// Add every conflict-free vertex. Additions never free up others, so
    /// one sweep reaches a maximal set.
    fn additions(&mut self) -> bool {
        let mut changed = false;
        for v in 0..self.conflicts.len() {
            if self.conflicts[v] == 0 && !self.in_set.contains(v) {
                self.add(v);
                changed = true;
            }
        }
        changed
    }

    /// For a member `u`, outside vertices whose only conflict is `u` become
    /// free when `u` leaves; any non-adjacent pair of them is a net gain.
    fn swap_pass(&mut self) -> bool {
        let mut changed = false;
        let members: Vec<usize> = self.in_set.ones().collect();
        let mut cands: Vec<usize> = Vec::new();
        for u in members {
            if !self.in_set.contains(u) {
                continue;
            }
            cands.clear();
            for &g in self.conn {
                let v = u ^ g;
                if !self.in_set.contains(v) && self.conflicts[v] == 1 {
                    cands.push(v);
                    if cands.len() == SWAP_CAND_CAP {
                        break;
                    }
                }
            }
            'pair: for i in 0..cands.len() {
                for j in i + 1..cands.len() {
                    if !self.forbidden.contains(cands[i] ^ cands[j]) {
                        self.remove(u);
                        self.add(cands[i]);
                        self.add(cands[j]);
                        changed = true;
                        break 'pair;
                    }
                }
            }
        }
        changed
    }

    fn members(&self) -> Vec<usize> {
        self.in_set.ones().collect()
    }
}

// ---- Base branch-and-bound ----

struct Instance {
    size: usize,
    dim: u32,
    conn: Vec<usize>,
    /// Neighbor bitset per vertex (conflict graph).
    adj: Vec<FixedBitSet>,
    /// Complement rows with the diagonal cleared: `P & compat[v]` is the
    /// candidate set still compatible after taking `v`.
    compat: Vec<FixedBitSet>,
    cosets: Option<Cosets>,
}

/// Partition of the vertex set into cosets of an all-forbidden subgroup;
/// each coset is a clique, so the number of cosets meeting a candidate set
/// bounds the independent sets inside it.
struct Cosets {
    id: Vec<u32>,
    count: usize,
}

struct Scratch {
    /// Per coset: last search node that saw it (generation stamps avoid
    /// clearing the arrays at every node).
    stamp: Vec<u32>,
    clique_of: Vec<u32>,
    tick: u32,
}

impl Instance {
    fn new(dim: u32, conn: &[usize]) -> Instance {
        let size = 1usize << dim;
        let forbidden = conn_bits(size, conn);
        let mut adj = Vec::with_capacity(size);
        let mut compat = Vec::with_capacity(size);
        for v in 0..size {
            let mut row = FixedBitSet::with_capacity(size);
            for &g in conn {
                row.insert(v ^ g);
            }
            let mut inv = row.clone();
            inv.toggle_range(..);
            inv.set(v, false);
            adj.push(row);
            compat.push(inv);
        }
        let basis = clique_subgroup(conn, &forbidden);
        let cosets = (basis.len() >= 2).then(|| {
            let members = span_of(&basis);
            let mut id = vec![u32::MAX; size];
            let mut count = 0usize;
            for v in 0..size {
                if id[v] == u32::MAX {
                    for &s in &members {
                        id[v ^ s] = count as u32;
                    }
                    count += 1;
                }
            }
            Cosets { id, count }
        });
        Instance {
            size,
            dim,
            conn: conn.to_vec(),
            adj,
            compat,
            cosets,
        }
    }

    fn solve(&self) -> Vec<usize> {
        // Incumbent from the heuristic: the search then only has to prove
        // optimality (or beat it). A few extra seeds are cheap next to the
        // branch-and-bound and a tighter start prunes noticeably.
        let mut best = (0..4)
            .map(|seed| heuristic_core(self.dim, &self.conn, seed))
            .max_by_key(Vec::len)
            .unwrap();
        let coset_count = self.cosets.as_ref().map_or(0, |c| c.count);
        let mut scratch = Scratch {
            stamp: vec![0; coset_count],
            clique_of: vec![0; coset_count],
            tick: 0,
        };
        // Vertex-transitivity: some maximum set contains 0, so root there.
        let mut current = vec![0usize];
        let p = self.compat[0].clone();
        self.expand(&p, &mut current, &mut best, &mut scratch);
        best.sort_unstable();
        best
    }

    fn expand(
        &self,
        p: &FixedBitSet,
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
        scratch: &mut Scratch,
    ) {
        let order = self.cover(p, scratch);
        let mut p = p.clone();
        for &(v, idx) in order.iter().rev() {
            // Everything left (this vertex and earlier) fits inside `idx`
            // cliques, so an extension can add at most `idx` vertices.
            if current.len() + idx as usize <= best.len() {
                return;
            }
            let v = v as usize;
            p.set(v, false);
            current.push(v);
            if current.len() > best.len() {
                best.clone_from(current);
            }
            let mut child = p.clone();
            child.intersect_with(&self.compat[v]);
            if child.count_ones(..) > 0 {
                self.expand(&child, current, best, scratch);
            }
            current.pop();
        }
    }

    /// Clique cover of `p`, as `(vertex, clique index)` with indices
    /// 1-based and nondecreasing. Takes whichever of the greedy cover and
    /// the coset cover uses fewer cliques.
    fn cover(&self, p: &FixedBitSet, scratch: &mut Scratch) -> Vec<(u32, u32)> {
        let greedy = self.greedy_cover(p);
        if let Some(cosets) = &self.cosets {
            let coset = self.coset_cover(p, cosets, scratch);
            let coset_count = coset.last().map_or(0, |&(_, idx)| idx);
            let greedy_count = greedy.last().map_or(0, |&(_, idx)| idx);
            if coset_count < greedy_count {
                return coset;
            }
        }
        greedy
    }

    fn greedy_cover(&self, p: &FixedBitSet) -> Vec<(u32, u32)> {
        let mut rest = p.clone();
        let mut cand = FixedBitSet::with_capacity(self.size);
        let mut out = Vec::new();
        let mut idx = 0u32;
        while let Some(v) = rest.ones().next() {
            idx += 1;
            rest.set(v, false);
            out.push((v as u32, idx));
            cand.clone_from(&rest);
            cand.intersect_with(&self.adj[v]);
            while let Some(u) = cand.ones().next() {
                rest.set(u, false);
                cand.set(u, false);
                cand.intersect_with(&self.adj[u]);
                out.push((u as u32, idx));
            }
        }
        out
    }

    fn coset_cover(
        &self,
        p: &FixedBitSet,
        cosets: &Cosets,
        scratch: &mut Scratch,
    ) -> Vec<(u32, u32)> {
        scratch.tick += 1;
        let mut idx = 0u32;
        let mut out: Vec<(u32, u32)> = p
            .ones()
            .map(|v| {
                let c = cosets.id[v] as usize;
                if scratch.stamp[c] != scratch.tick {
                    scratch.stamp[c] = scratch.tick;
                    idx += 1;
                    scratch.clique_of[c] = idx;
                }
                (v as u32, scratch.clique_of[c])
            })
            .collect();
        out.sort_by_key(|&(_, idx)| idx);
        out
    }
}

/// Basis of a subgroup whose nonzero elements all lie in the connection
/// set (empty if not even a K4 exists). Greedy: first pair with a
/// forbidden sum, then any growth keeping every combination forbidden.
fn clique_subgroup(conn: &[usize], forbidden: &FixedBitSet) -> Vec<usize> {
    let mut basis: Vec<usize> = Vec::new();
    'seed: for (i, &a) in conn.iter().enumerate() {
        for &b in &conn[i + 1..] {
            if forbidden.contains(a ^ b) {
                basis = vec![a, b];
                break 'seed;
            }
        }
    }
    if basis.is_empty() {
        return basis;
    }
    loop {
        let members = span_of(&basis);
        let grown = conn.iter().copied().find(|&c| {
            !members.contains(&c) && members.iter().all(|&m| m == 0 || forbidden.contains(c ^ m))
        });
        match grown {
            Some(c) => basis.push(c),
            None => return basis,
        }
    }
}

fn span_of(basis: &[usize]) -> Vec<usize> {
    let mut members = vec![0usize];
    for &b in basis {
        for i in 0..members.len() {
            members.push(b ^ members[i]);
        }
    }
    members
}
