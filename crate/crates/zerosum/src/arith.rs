//! Factorization arithmetic of the monoid of product-one sequences: sets of
//! factorization lengths, bounded unions of them, and the extremal
//! invariants `rho_k` (largest element of the union at `k`) and `lambda_k`
//! (smallest).
//!
//! The length-set computation runs over the same sub-multiset table as the
//! product sets: a sub-multiset is an atom exactly when it is product-one
//! and no divisor splits it, and
//!
//! ```text
//! L(B) = union over atom divisors A of B with pivot(B) in A
//!        of { 1 + l : l in L(B · A^[-1]) }
//! ```
//!
//! where the pivot is the least element of the support.  Fixing the pivot
//! removes factor-order double counting without losing any lengths.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::atoms::{large_davenport, SearchConfig};
use crate::error::{Error, Result};
use crate::group::{Group, GroupKind};
use crate::seq::{ProductTable, Sequence};

/// A finite set of factorization lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthSet {
    lengths: BTreeSet<usize>,
}

impl LengthSet {
    pub fn from_set(lengths: BTreeSet<usize>) -> Self {
        LengthSet { lengths }
    }

    pub fn min(&self) -> Option<usize> {
        self.lengths.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.lengths.last().copied()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lengths.contains(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.lengths.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn as_set(&self) -> &BTreeSet<usize> {
        &self.lengths
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.lengths.iter().map(|l| l.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Exact set of factorization lengths of a product-one sequence.
pub fn length_set(b: &Sequence, cfg: &SearchConfig) -> Result<LengthSet> {
    if b.is_empty() {
        return Ok(LengthSet::from_set([0].into()));
    }
    let table = LengthTable::build(b, cfg.budget)?;
    if !table.product_one {
        return Err(Error::domain(
            "length sets are defined for product-one sequences",
        ));
    }
    Ok(LengthSet::from_set(mask_to_set(table.full_lengths())))
}

fn mask_to_set(mask: u64) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut bits = mask;
    while bits != 0 {
        out.insert(bits.trailing_zeros() as usize);
        bits &= bits - 1;
    }
    out
}

/// Length sets for every sub-multiset of a base sequence, as bitmasks.
struct LengthTable {
    product_one: bool,
    lens: Vec<u64>,
}

impl LengthTable {
    fn build(b: &Sequence, budget: usize) -> Result<Self> {
        if b.len() > 63 {
            return Err(Error::capacity(
                "length sets support sequences of length at most 63",
            ));
        }
        let table = ProductTable::build_with(b, budget)?;
        let nkeys = table.num_keys();
        let support = table.support().to_vec();
        let weights = table.weights().to_vec();
        let radices = table.radices().to_vec();

        let mut atom = vec![false; nkeys];
        let mut lens = vec![0u64; nkeys];
        lens[0] = 1; // empty sequence factors with length 0

        let mut digits = vec![0u32; support.len()];
        for key in 1..nkeys {
            let mut p = 0;
            loop {
                if digits[p] < radices[p] {
                    digits[p] += 1;
                    break;
                }
                digits[p] = 0;
                p += 1;
            }
            if !table.po_at(key) {
                continue;
            }
            let pivot = digits.iter().position(|&d| d > 0).expect("non-empty key");
            let mut acc = 0u64;
            let mut has_split = false;
            // Divisors containing the pivot element, by digit recursion.
            divisor_walk(&digits, &weights, pivot, 0, 0, &mut |t: usize| {
                if t == key {
                    return;
                }
                if table.po_at(t) {
                    if table.po_at(key - t) {
                        has_split = true;
                    }
                    if atom[t] {
                        acc |= lens[key - t] << 1;
                    }
                }
            });
            if !has_split {
                atom[key] = true;
                acc |= 1 << 1; // the sequence itself is one atom
            }
            lens[key] = acc;
        }

        Ok(LengthTable {
            product_one: table.is_product_one(),
            lens,
        })
    }

    fn full_lengths(&self) -> u64 {
        *self.lens.last().unwrap()
    }
}

/// Enumerates divisor keys of the current key whose digit at `pivot` is at
/// least one.
fn divisor_walk(
    digits: &[u32],
    weights: &[usize],
    pivot: usize,
    pos: usize,
    key_so_far: usize,
    visit: &mut impl FnMut(usize),
) {
    if pos == digits.len() {
        visit(key_so_far);
        return;
    }
    let lo = if pos == pivot { 1 } else { 0 };
    for d in lo..=digits[pos] {
        divisor_walk(
            digits,
            weights,
            pivot,
            pos + 1,
            key_so_far + d as usize * weights[pos],
            visit,
        );
    }
}

/// Union of length sets over product-one sequences of bounded length that
/// contain `k`: a monotone under-approximation of the full union at `k`.
#[derive(Clone, Debug)]
pub struct BoundedUnion {
    pub k: usize,
    /// The bound the enumeration ran with; results below are complete for
    /// sequences up to this length only.
    pub max_len: usize,
    pub lengths: BTreeSet<usize>,
}

pub fn unions_bounded(
    group: &Group,
    k: usize,
    max_len: usize,
    cfg: &SearchConfig,
) -> Result<BoundedUnion> {
    if k < 1 {
        return Err(Error::domain("k must be positive"));
    }
    let auts = group.automorphism_group()?;
    let order = group.order();

    // Canonical counts vectors of every total length up to the bound;
    // lengths are invariant under relabeling, so orbits contribute once.
    let mut candidates: Vec<Vec<u32>> = Vec::new();
    let mut counts = vec![0u32; order];
    fn rec(
        pos: usize,
        left: usize,
        order: usize,
        auts: &[Vec<usize>],
        counts: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
    ) {
        if pos == order {
            let nonempty = counts.iter().any(|&c| c > 0);
            if nonempty && is_lex_min(auts, counts) {
                out.push(counts.clone());
            }
            return;
        }
        for c in 0..=left {
            counts[pos] = c as u32;
            rec(pos + 1, left - c, order, auts, counts, out);
        }
        counts[pos] = 0;
    }
    rec(0, max_len, order, &auts, &mut counts, &mut candidates);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| Error::capacity(format!("worker pool: {e}")))?;
    let budget = cfg.budget;
    let sets: Result<Vec<BTreeSet<usize>>> = pool.install(|| {
        candidates
            .par_iter()
            .map(|c| {
                let seq = Sequence::new(group, c.clone())?;
                let table = LengthTable::build(&seq, budget)?;
                if !table.product_one {
                    return Ok(BTreeSet::new());
                }
                let lengths = mask_to_set(table.full_lengths());
                if lengths.contains(&k) {
                    Ok(lengths)
                } else {
                    Ok(BTreeSet::new())
                }
            })
            .collect()
    });
    let mut lengths = BTreeSet::new();
    for s in sets? {
        lengths.extend(s);
    }
    Ok(BoundedUnion {
        k,
        max_len,
        lengths,
    })
}

fn is_lex_min(auts: &[Vec<usize>], counts: &[u32]) -> bool {
    'auts: for a in auts {
        for j in 0..counts.len() {
            if counts[a[j]] < counts[j] {
                return false;
            }
            if counts[a[j]] > counts[j] {
                continue 'auts;
            }
        }
    }
    true
}

/// How a reported value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueSource {
    /// Unions collapse for groups of order at most two.
    TrivialGroup,
    /// An element with a length-1 factorization is an atom.
    AtomIndex,
    /// Even index: `rho_{2m} = m D(G)`.
    EvenIndex,
    /// Odd index over an odd dihedral group: `rho_k = k n`.
    OddDihedral,
    /// Odd index where the lower construction meets the upper cap.
    BoundsMeet,
    /// Only bounds are known; no exact value is fabricated.
    BoundsOnly,
    /// Exact multiples of the Davenport constant: `lambda_{lD} = 2l`.
    DavenportMultiple,
    /// Piecewise value determined by the exact odd-index maximum.
    PiecewiseExact,
}

impl ValueSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            ValueSource::TrivialGroup => "trivial-group",
            ValueSource::AtomIndex => "atom-index",
            ValueSource::EvenIndex => "even-index",
            ValueSource::OddDihedral => "odd-dihedral",
            ValueSource::BoundsMeet => "bounds-meet",
            ValueSource::BoundsOnly => "bounds-only",
            ValueSource::DavenportMultiple => "davenport-multiple",
            ValueSource::PiecewiseExact => "piecewise-exact",
        }
    }
}

/// Value report for `rho_k` or `lambda_k`: an exact value when one is
/// known, otherwise honest bounds, plus an explicit witness sequence for
/// lower bounds on `rho_k`.
#[derive(Clone, Debug)]
pub struct RhoLambdaReport {
    pub k: usize,
    /// Exact value, when determined.
    pub formula_value: Option<usize>,
    pub lower_bound: usize,
    pub upper_bound: usize,
    /// A sequence `B` with `k` in `L(B)` attaining `attained` in `L(B)`,
    /// built from explicit maximal atoms.
    pub lower_witness: Option<(Sequence, usize)>,
    pub source: ValueSource,
}

/// Shared state for the arithmetic queries over one group: the Davenport
/// constant and a maximal atom are computed once.
pub struct ArithContext {
    group: Group,
    cfg: SearchConfig,
    davenport: usize,
    max_atom: Sequence,
}

impl ArithContext {
    pub fn new(group: &Group, cfg: &SearchConfig) -> Result<Self> {
        let (davenport, max_atom) = large_davenport(group, cfg)?;
        Ok(ArithContext {
            group: group.clone(),
            cfg: *cfg,
            davenport,
            max_atom,
        })
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn davenport(&self) -> usize {
        self.davenport
    }

    pub fn max_atom(&self) -> &Sequence {
        &self.max_atom
    }

    /// A sequence whose length set contains both 2 and `j`, built by
    /// truncating a maximal atom; exists exactly for `2 <= j <= D(G)`.
    pub fn witness_pair(&self, j: usize) -> Result<Sequence> {
        if j < 2 || j > self.davenport {
            return Err(Error::domain(format!(
                "a shared length set with 2 exists exactly for j in [2, {}]",
                self.davenport
            )));
        }
        let g = &self.group;
        let ordering = self
            .max_atom
            .ordering_witness()?
            .ok_or_else(|| Error::validation("maximal atom lost its product-one ordering"))?;
        // V = g_1 ... g_{j-1} · (g_j ... g_l), an atom of length j.
        let mut pairs: Vec<(usize, u32)> = Vec::new();
        for &e in &ordering[..j - 1] {
            pairs.push((e, 1));
        }
        let mut tail = g.identity();
        for &e in &ordering[j - 1..] {
            tail = g.mul(tail, e);
        }
        pairs.push((tail, 1));
        let v = Sequence::from_pairs(g, &pairs)?;
        let b = v.concat(&v.inverse())?;
        let lengths = length_set(&b, &self.cfg)?;
        if !lengths.contains(2) || !lengths.contains(j) {
            return Err(Error::validation(format!(
                "witness verification failed for j = {j}: L = {lengths}"
            )));
        }
        Ok(b)
    }

    /// Largest length reachable together with `k`.
    pub fn rho(&self, k: usize) -> Result<RhoLambdaReport> {
        if k < 1 {
            return Err(Error::domain("k must be positive"));
        }
        let d = self.davenport;
        if self.group.order() <= 2 {
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(k),
                lower_bound: k,
                upper_bound: k,
                lower_witness: None,
                source: ValueSource::TrivialGroup,
            });
        }
        if k == 1 {
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(1),
                lower_bound: 1,
                upper_bound: 1,
                lower_witness: Some((self.max_atom.clone(), 1)),
                source: ValueSource::AtomIndex,
            });
        }
        if k.is_multiple_of(2) {
            let value = (k / 2) * d;
            let witness = self.atom_pair_power(k / 2)?;
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(value),
                lower_bound: value,
                upper_bound: value,
                lower_witness: Some((witness, value)),
                source: ValueSource::EvenIndex,
            });
        }

        // odd k >= 3: the lower construction concatenates three
        // interlocking maximal atoms with (k-3)/2 mirror pairs.
        match self.triple_witness()? {
            Some((triple, attained3)) => {
                let blocks = (k - 3) / 2;
                let witness = if blocks > 0 {
                    triple.concat(&self.atom_pair_power(blocks)?)?
                } else {
                    triple
                };
                let attained = attained3 + blocks * d;
                let is_odd_dihedral =
                    matches!(self.group.kind(), GroupKind::Dihedral { n } if n % 2 == 1);
                // Odd dihedral groups attain the generic cap kD/2 = kn; for
                // even dihedral and dicyclic groups the top value
                // floor(kD/2) is never attained, so the cap drops by one.
                let upper = if is_odd_dihedral {
                    attained
                } else {
                    k * d / 2 - 1
                };
                let (formula_value, source) = if is_odd_dihedral {
                    (Some(attained), ValueSource::OddDihedral)
                } else if attained == upper {
                    (Some(attained), ValueSource::BoundsMeet)
                } else {
                    (None, ValueSource::BoundsOnly)
                };
                Ok(RhoLambdaReport {
                    k,
                    formula_value,
                    lower_bound: attained,
                    upper_bound: upper,
                    lower_witness: Some((witness, attained)),
                    source,
                })
            }
            None => {
                // No interlocking triple is available (cyclic and generic
                // groups): concatenation of mirror pairs plus one 2-cycle
                // atom gives kD/2 rounded down to (k-1)/2 blocks plus one.
                let blocks = (k - 1) / 2;
                let pairs = self.atom_pair_power(blocks)?;
                let single = self.short_atom()?;
                let witness = pairs.concat(&single)?;
                let attained = blocks * d + 1;
                Ok(RhoLambdaReport {
                    k,
                    formula_value: None,
                    lower_bound: attained,
                    upper_bound: k * d / 2,
                    lower_witness: Some((witness, attained)),
                    source: ValueSource::BoundsOnly,
                })
            }
        }
    }

    /// Smallest length reachable together with `k`.
    pub fn lambda(&self, k: usize) -> Result<RhoLambdaReport> {
        if k < 1 {
            return Err(Error::domain("k must be positive"));
        }
        let d = self.davenport;
        if self.group.order() <= 2 {
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(k),
                lower_bound: k,
                upper_bound: k,
                lower_witness: None,
                source: ValueSource::TrivialGroup,
            });
        }
        let l = k / d;
        let j = k % d;
        if j == 0 {
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(2 * l),
                lower_bound: 2 * l,
                upper_bound: 2 * l,
                lower_witness: None,
                source: ValueSource::DavenportMultiple,
            });
        }
        // General bracket: 2l + ceil(2j/D) <= lambda_k <= min(2l + j, 2l + 2).
        let lower = 2 * l + (2 * j).div_ceil(d);
        let upper = (2 * l + j).min(2 * l + 2);
        if lower == upper {
            return Ok(RhoLambdaReport {
                k,
                formula_value: Some(lower),
                lower_bound: lower,
                upper_bound: upper,
                lower_witness: None,
                source: ValueSource::PiecewiseExact,
            });
        }
        // The value is 2l+1 exactly when j stays within reach of the odd
        // maximum: j <= rho_{2l+1} - lD.
        let rho_odd = self.rho(2 * l + 1)?;
        match rho_odd.formula_value {
            Some(rho) => {
                let threshold = rho - l * d;
                let value = if j <= threshold { 2 * l + 1 } else { 2 * l + 2 };
                Ok(RhoLambdaReport {
                    k,
                    formula_value: Some(value),
                    lower_bound: value,
                    upper_bound: value,
                    lower_witness: None,
                    source: ValueSource::PiecewiseExact,
                })
            }
            None => Ok(RhoLambdaReport {
                k,
                formula_value: None,
                lower_bound: lower,
                upper_bound: upper,
                lower_witness: None,
                source: ValueSource::BoundsOnly,
            }),
        }
    }

    /// `(A · A^[-1])^[m]` for the stored maximal atom `A`.
    fn atom_pair_power(&self, m: usize) -> Result<Sequence> {
        let pair = self.max_atom.concat(&self.max_atom.inverse())?;
        let mut out = Sequence::empty(&self.group);
        for _ in 0..m {
            out = out.concat(&pair)?;
        }
        Ok(out)
    }

    /// A shortest atom other than the identity: `g · g^[-1]`.
    fn short_atom(&self) -> Result<Sequence> {
        let g = &self.group;
        let e = (0..g.order())
            .find(|&e| e != g.identity())
            .ok_or_else(|| Error::domain("the trivial group has no 2-cycle atoms"))?;
        Sequence::from_pairs(g, &[(e, 1), (g.inverse(e), 1)])
    }

    /// Three interlocking maximal atoms whose product factors both into 3
    /// atoms and into many 2-cycles; returns the sequence and the large
    /// attained length.
    fn triple_witness(&self) -> Result<Option<(Sequence, usize)>> {
        let g = &self.group;
        match g.kind() {
            GroupKind::Dihedral { n } if n % 2 == 1 && n >= 3 => {
                // (at)^[n] t^[n] · (a2t)^[n] (at)^[n] · (a2t)^[n] t^[n]
                let u = Sequence::from_pairs(g, &[(n + 1, n as u32), (n, n as u32)])?;
                let v = Sequence::from_pairs(g, &[(n + 2, n as u32), (n + 1, n as u32)])?;
                let w = Sequence::from_pairs(g, &[(n + 2, n as u32), (n, n as u32)])?;
                let b = u.concat(&v)?.concat(&w)?;
                Ok(Some((b, 3 * n)))
            }
            GroupKind::Dihedral { n } if n % 2 == 0 && n >= 4 => {
                let run = (n + n / 2 - 2) as u32;
                let u = Sequence::from_pairs(g, &[(1, run), (n, 1), (n + n / 2, 1)])?;
                let v = Sequence::from_pairs(g, &[(n - 1, run), (n + 1, 1), (n + n / 2 + 1, 1)])?;
                let w = Sequence::from_pairs(
                    g,
                    &[(n, 1), (n + n / 2, 1), (n + 1, 1), (n + n / 2 + 1, 1)],
                )?;
                let b = u.concat(&v)?.concat(&w)?;
                Ok(Some((b, self.davenport + 2)))
            }
            GroupKind::Dicyclic { n } => {
                let m = 2 * n;
                let run = (3 * n - 2) as u32;
                let u = Sequence::from_pairs(g, &[(1, run), (m, 2)])?;
                let v = Sequence::from_pairs(g, &[(m - 1, run), (m + 1, 2)])?;
                let w = Sequence::from_pairs(g, &[(m + n, 2), (m + n + 1, 2)])?;
                let b = u.concat(&v)?.concat(&w)?;
                Ok(Some((b, self.davenport + 2)))
            }
            _ => Ok(None),
        }
    }
}

/// One-shot helpers over a fresh context.
pub fn rho(group: &Group, k: usize, cfg: &SearchConfig) -> Result<RhoLambdaReport> {
    ArithContext::new(group, cfg)?.rho(k)
}

pub fn lambda(group: &Group, k: usize, cfg: &SearchConfig) -> Result<RhoLambdaReport> {
    ArithContext::new(group, cfg)?.lambda(k)
}

pub fn witness_pair(group: &Group, j: usize, cfg: &SearchConfig) -> Result<Sequence> {
    ArithContext::new(group, cfg)?.witness_pair(j)
}
