//! Closed-form families of extremal atoms over dihedral and dicyclic
//! groups, set-equality verification against exhaustive censuses, and the
//! numeric side conditions those characterizations rest on (the
//! DeVos–Goddyn–Mohar lower bound and small Erdős–Ginzburg–Ziv constants).

use std::collections::BTreeSet;

use crate::atoms::{large_davenport, max_atom_census, restricted_atom_census, SearchConfig};
use crate::error::{Error, Result};
use crate::group::{Element, ElementSet, Group, GroupKind};
use crate::seq::Sequence;

/// One closed-form family of sequences, written relative to the canonical
/// presentation and closed under the admissible automorphisms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyForm {
    /// `a^[2n-2] · t^[2]` over a dihedral group with odd `n >= 3`.
    OddDihedralRun,
    /// `(a^i t)^[n] · (a^j t)^[n]` with `gcd(i-j, n) = 1`, odd `n >= 3`.
    OddDihedralPair,
    /// `a^[n + n/2 - 2] · t · (a^{n/2} t)` over a dihedral group with even
    /// `n >= 4`.
    EvenDihedralRun,
    /// `a^[3n-2] · t^[2]` over a dicyclic group of order `4n`, `n >= 2`.
    DicyclicRun,
    /// Reflection-supported length-`n` atoms of a dihedral group, `n = 4`:
    /// `t · at · a2t · a3t` and `(a^x t)^[2] · a^y t · a^{y+2} t` with
    /// `x ≡ y+1 (mod 2)`.
    DihedralReflectionQuad,
    /// Reflection-supported length-`n` atoms of a dihedral group, even
    /// `n >= 4`, as two opposite-pair blocks
    /// `(a^x t)^[v] (a^{x+n/2} t)^[n/2-v] (a^y t)^[w] (a^{y+n/2} t)^[n/2-w]`
    /// with `2x ≠ 2y (mod n)`, `gcd(x-y, n/2) = 1`, `v-w ≡ x-y (mod 2)`.
    DihedralReflectionBlocks,
    /// Reflection-supported length-`2n+2` atoms of a dicyclic group,
    /// `n >= 3`: `(a^x t)^[n+2] · (a^y t)^[2] · a^{y+n} t · a^{y_1} t ...`
    /// subject to the closing congruence.
    DicyclicReflectionMixed,
    /// Reflection-supported length-`2n+2` atoms of a dicyclic group,
    /// `n >= 2`: `(a^x t)^[n+2] · (a^y t)^[n]` subject to the congruence.
    DicyclicReflectionUniform,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Generates the full family as literal counts vectors: all admissible
/// parameter tuples, expanded over every automorphism that preserves the
/// family's support constraint, duplicates removed.
pub fn generate_family(group: &Group, form: FamilyForm) -> Result<BTreeSet<Vec<u32>>> {
    let order = group.order();
    let mut base: Vec<Vec<u32>> = Vec::new();

    match (group.kind(), form) {
        (GroupKind::Dihedral { n }, FamilyForm::OddDihedralRun) if n >= 3 && n % 2 == 1 => {
            let mut c = vec![0u32; order];
            c[1] = 2 * n as u32 - 2;
            c[n] = 2;
            base.push(c);
        }
        (GroupKind::Dihedral { n }, FamilyForm::OddDihedralPair) if n >= 3 && n % 2 == 1 => {
            for i in 0..n {
                for j in i + 1..n {
                    if gcd(j - i, n) == 1 {
                        let mut c = vec![0u32; order];
                        c[n + i] = n as u32;
                        c[n + j] = n as u32;
                        base.push(c);
                    }
                }
            }
        }
        (GroupKind::Dihedral { n }, FamilyForm::EvenDihedralRun) if n >= 4 && n % 2 == 0 => {
            let mut c = vec![0u32; order];
            c[1] = (n + n / 2 - 2) as u32;
            c[n] = 1;
            c[n + n / 2] = 1;
            base.push(c);
        }
        (GroupKind::Dicyclic { n }, FamilyForm::DicyclicRun) if n >= 2 => {
            let mut c = vec![0u32; order];
            c[1] = 3 * n as u32 - 2;
            c[2 * n] = 2;
            base.push(c);
        }
        (GroupKind::Dihedral { n }, FamilyForm::DihedralReflectionQuad) if n == 4 => {
            let refl = |i: usize| n + i % n;
            let mut c = vec![0u32; order];
            for i in 0..4 {
                c[refl(i)] = 1;
            }
            base.push(c);
            for x in 0..4 {
                for y in 0..4 {
                    if x % 2 == (y + 1) % 2 {
                        let mut c = vec![0u32; order];
                        c[refl(x)] += 2;
                        c[refl(y)] += 1;
                        c[refl(y + 2)] += 1;
                        base.push(c);
                    }
                }
            }
        }
        (GroupKind::Dihedral { n }, FamilyForm::DihedralReflectionBlocks)
            if n >= 4 && n % 2 == 0 =>
        {
            let refl = |i: usize| n + i % n;
            let half = n / 2;
            for x in 0..n {
                for y in 0..n {
                    if (2 * x) % n == (2 * y) % n {
                        continue;
                    }
                    if gcd((x + n - y) % n % half, half) != 1 {
                        continue;
                    }
                    for v in 0..=half {
                        for w in 0..=half {
                            if (x + n - y) % 2 != (v + n - w) % 2 {
                                continue;
                            }
                            let mut c = vec![0u32; order];
                            c[refl(x)] += v as u32;
                            c[refl(x + half)] += (half - v) as u32;
                            c[refl(y)] += w as u32;
                            c[refl(y + half)] += (half - w) as u32;
                            base.push(c);
                        }
                    }
                }
            }
        }
        (GroupKind::Dicyclic { n }, FamilyForm::DicyclicReflectionMixed) if n >= 3 => {
            let m = 2 * n;
            let refl = |i: usize| m + i % m;
            for x in 0..m {
                let allowed: Vec<usize> = (0..m).filter(|&z| (2 * z) % m != (2 * x) % m).collect();
                for &y in &allowed {
                    // choose the multiset y_1 <= ... <= y_{n-3} from allowed
                    let mut chosen = Vec::new();
                    enumerate_multisets(&allowed, n - 3, 0, &mut chosen, &mut |ys| {
                        let sum: usize = ys.iter().sum();
                        let lhs = (sum + 3 * y + n + x) % m;
                        let rhs = ((n + 1) * (x + n)) % m;
                        if lhs == rhs {
                            let mut c = vec![0u32; order];
                            c[refl(x)] += n as u32 + 2;
                            c[refl(y)] += 2;
                            c[refl(y + n)] += 1;
                            for &yi in ys {
                                c[refl(yi)] += 1;
                            }
                            base.push(c);
                        }
                    });
                }
            }
        }
        (GroupKind::Dicyclic { n }, FamilyForm::DicyclicReflectionUniform) if n >= 2 => {
            let m = 2 * n;
            let refl = |i: usize| m + i % m;
            for x in 0..m {
                for y in 0..m {
                    if (2 * y) % m == (2 * x) % m {
                        continue;
                    }
                    if (n * y + x) % m != ((n + 1) * (x + n)) % m {
                        continue;
                    }
                    let mut c = vec![0u32; order];
                    c[refl(x)] += n as u32 + 2;
                    c[refl(y)] += n as u32;
                    base.push(c);
                }
            }
        }
        _ => {
            return Err(Error::domain(format!(
                "family {form:?} does not apply to {}",
                group.kind()
            )))
        }
    }

    // Realize the "there exist generators" quantification: expand over the
    // automorphisms.  Reflection-restricted families stay inside the
    // reflection coset, so only rotation-preserving automorphisms apply.
    let auts = group.automorphism_group()?;
    let rotations = rotation_count(group);
    let keep_rotations = matches!(
        form,
        FamilyForm::DihedralReflectionQuad
            | FamilyForm::DihedralReflectionBlocks
            | FamilyForm::DicyclicReflectionMixed
            | FamilyForm::DicyclicReflectionUniform
    );
    let mut out = BTreeSet::new();
    for a in &auts {
        if keep_rotations && (0..rotations).any(|e| a[e] >= rotations) {
            continue;
        }
        for b in &base {
            let mut image = vec![0u32; order];
            for (e, &c) in b.iter().enumerate() {
                image[a[e]] = c;
            }
            out.insert(image);
        }
    }
    Ok(out)
}

/// Number of elements in the cyclic index-2 subgroup of a presented group.
fn rotation_count(group: &Group) -> usize {
    match group.kind() {
        GroupKind::Dihedral { n } => n,
        GroupKind::Dicyclic { n } => 2 * n,
        _ => group.order(),
    }
}

fn enumerate_multisets(
    values: &[usize],
    size: usize,
    from: usize,
    chosen: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    for i in from..values.len() {
        chosen.push(values[i]);
        enumerate_multisets(values, size, i, chosen, visit);
        chosen.pop();
    }
}

/// A characterization to verify against censuses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Statement {
    /// Atoms of maximal length over a dihedral group with odd `n`.
    MaxAtomsDihedralOdd,
    /// Atoms of maximal length over a dihedral group with even `n`.
    MaxAtomsDihedralEven,
    /// Atoms of maximal length over a dicyclic group.
    MaxAtomsDicyclic,
    /// Reflection-supported atoms of length `>= n` over an even dihedral
    /// group, plus the non-existence claim above length `n`.
    ReflectionAtomsDihedral,
    /// Reflection-supported atoms of length `>= 2n+2` over a dicyclic
    /// group, plus the non-existence claim above length `2n+2`.
    ReflectionAtomsDicyclic,
}

impl Statement {
    /// Accepts both descriptive names and the compact aliases used by the
    /// command line (`max-atoms`, `reflection-atoms`, `thm4.1`, `prop3.3`,
    /// ...).  Aliases that encode the group kind are validated against it.
    pub fn parse(text: &str, kind: GroupKind) -> Result<Statement> {
        let auto_max = match kind {
            GroupKind::Dihedral { n } if n % 2 == 1 => Some(Statement::MaxAtomsDihedralOdd),
            GroupKind::Dihedral { .. } => Some(Statement::MaxAtomsDihedralEven),
            GroupKind::Dicyclic { .. } => Some(Statement::MaxAtomsDicyclic),
            _ => None,
        };
        let auto_refl = match kind {
            GroupKind::Dihedral { .. } => Some(Statement::ReflectionAtomsDihedral),
            GroupKind::Dicyclic { .. } => Some(Statement::ReflectionAtomsDicyclic),
            _ => None,
        };
        let want = |s: Option<Statement>| {
            s.ok_or_else(|| Error::domain(format!("statement '{text}' does not apply to {kind}")))
        };
        match text {
            "max-atoms" => want(auto_max),
            "reflection-atoms" => want(auto_refl),
            "thm4.1" | "thm41" => match auto_max {
                Some(Statement::MaxAtomsDihedralOdd) => Ok(Statement::MaxAtomsDihedralOdd),
                _ => Err(Error::domain(
                    "thm4.1 applies to dihedral groups with odd n",
                )),
            },
            "thm4.2" | "thm42" => match auto_max {
                Some(Statement::MaxAtomsDihedralEven) => Ok(Statement::MaxAtomsDihedralEven),
                _ => Err(Error::domain(
                    "thm4.2 applies to dihedral groups with even n",
                )),
            },
            "thm4.3" | "thm43" => match auto_max {
                Some(Statement::MaxAtomsDicyclic) => Ok(Statement::MaxAtomsDicyclic),
                _ => Err(Error::domain("thm4.3 applies to dicyclic groups")),
            },
            "prop3.2" | "prop32" => match auto_refl {
                Some(Statement::ReflectionAtomsDihedral) => Ok(Statement::ReflectionAtomsDihedral),
                _ => Err(Error::domain("prop3.2 applies to dihedral groups")),
            },
            "prop3.3" | "prop33" => match auto_refl {
                Some(Statement::ReflectionAtomsDicyclic) => Ok(Statement::ReflectionAtomsDicyclic),
                _ => Err(Error::domain("prop3.3 applies to dicyclic groups")),
            },
            other => Err(Error::domain(format!("unknown statement '{other}'"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Statement::MaxAtomsDihedralOdd => "max-atoms-dihedral-odd",
            Statement::MaxAtomsDihedralEven => "max-atoms-dihedral-even",
            Statement::MaxAtomsDicyclic => "max-atoms-dicyclic",
            Statement::ReflectionAtomsDihedral => "reflection-atoms-dihedral",
            Statement::ReflectionAtomsDicyclic => "reflection-atoms-dicyclic",
        }
    }
}

/// Outcome of the non-existence side of a reflection statement: no atom may
/// carry `bound` or more reflection terms.
#[derive(Clone, Debug)]
pub struct NonExistence {
    /// Threshold on the reflection part of an atom.
    pub bound: usize,
    /// Full-census lengths that were scanned (all lengths above the large
    /// Davenport constant are empty by the downward search).
    pub checked_lengths: Vec<usize>,
    pub violations: Vec<Sequence>,
    pub holds: bool,
}

/// Report of one characterization check.
#[derive(Clone, Debug)]
pub struct CharacterizationReport {
    pub statement: Statement,
    pub group: Group,
    /// Length of the sequences the statement characterizes.
    pub length: usize,
    pub family_size: usize,
    pub census_size: usize,
    pub equal: bool,
    /// In the family but missed by the census.
    pub missing: Vec<Sequence>,
    /// Found by the census but outside the family.
    pub extra: Vec<Sequence>,
    pub non_existence: Option<NonExistence>,
}

impl CharacterizationReport {
    pub fn verified(&self) -> bool {
        self.equal && self.non_existence.as_ref().is_none_or(|n| n.holds)
    }
}

/// Verifies one characterization exhaustively: generates the closed-form
/// family, runs the corresponding census, and compares literal sequence
/// sets (orbits expanded).
pub fn verify_characterization(
    group: &Group,
    statement: Statement,
    cfg: &SearchConfig,
) -> Result<CharacterizationReport> {
    match statement {
        Statement::MaxAtomsDihedralOdd => {
            let forms = &[FamilyForm::OddDihedralRun, FamilyForm::OddDihedralPair];
            verify_max_atoms(group, statement, forms, cfg)
        }
        Statement::MaxAtomsDihedralEven => {
            verify_max_atoms(group, statement, &[FamilyForm::EvenDihedralRun], cfg)
        }
        Statement::MaxAtomsDicyclic => {
            verify_max_atoms(group, statement, &[FamilyForm::DicyclicRun], cfg)
        }
        Statement::ReflectionAtomsDihedral => {
            let n = match group.kind() {
                GroupKind::Dihedral { n } if n >= 4 && n % 2 == 0 => n,
                _ => {
                    return Err(Error::domain(
                        "reflection-atoms-dihedral applies to dihedral groups with even n >= 4",
                    ))
                }
            };
            let forms: &[FamilyForm] = if n == 4 {
                &[FamilyForm::DihedralReflectionQuad]
            } else {
                &[FamilyForm::DihedralReflectionBlocks]
            };
            verify_reflection_atoms(group, statement, forms, n, n + 2, cfg)
        }
        Statement::ReflectionAtomsDicyclic => {
            let n = match group.kind() {
                GroupKind::Dicyclic { n } => n,
                _ => {
                    return Err(Error::domain(
                        "reflection-atoms-dicyclic applies to dicyclic groups",
                    ))
                }
            };
            let forms: &[FamilyForm] = if n >= 3 {
                &[
                    FamilyForm::DicyclicReflectionMixed,
                    FamilyForm::DicyclicReflectionUniform,
                ]
            } else {
                &[FamilyForm::DicyclicReflectionUniform]
            };
            verify_reflection_atoms(group, statement, forms, 2 * n + 2, 2 * n + 4, cfg)
        }
    }
}

fn family_union(group: &Group, forms: &[FamilyForm]) -> Result<BTreeSet<Vec<u32>>> {
    let mut family = BTreeSet::new();
    for &form in forms {
        family.extend(generate_family(group, form)?);
    }
    Ok(family)
}

fn diff_report(
    group: &Group,
    statement: Statement,
    length: usize,
    family: BTreeSet<Vec<u32>>,
    census: BTreeSet<Vec<u32>>,
    non_existence: Option<NonExistence>,
) -> Result<CharacterizationReport> {
    let missing = family
        .difference(&census)
        .map(|c| Sequence::new(group, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    let extra = census
        .difference(&family)
        .map(|c| Sequence::new(group, c.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CharacterizationReport {
        statement,
        group: group.clone(),
        length,
        family_size: family.len(),
        census_size: census.len(),
        equal: missing.is_empty() && extra.is_empty(),
        missing,
        extra,
        non_existence,
    })
}

fn verify_max_atoms(
    group: &Group,
    statement: Statement,
    forms: &[FamilyForm],
    cfg: &SearchConfig,
) -> Result<CharacterizationReport> {
    let (dav, _) = large_davenport(group, cfg)?;
    let family = family_union(group, forms)?;
    let census = max_atom_census(group, dav, cfg)?.expanded();
    diff_report(group, statement, dav, family, census, None)
}

fn verify_reflection_atoms(
    group: &Group,
    statement: Statement,
    forms: &[FamilyForm],
    stated_length: usize,
    bound: usize,
    cfg: &SearchConfig,
) -> Result<CharacterizationReport> {
    let order = group.order();
    let rotations = rotation_count(group);
    let refl_set = ElementSet::from_iter(order, rotations..order);

    // The downward search certifies there are no atoms longer than D.
    let (dav, _) = large_davenport(group, cfg)?;

    let family = family_union(group, forms)?;
    let mut census = restricted_atom_census(group, stated_length, refl_set, cfg)?.expanded();

    // Reflection-supported atoms of any greater length belong to the census
    // side of the comparison; the statement says there are none.
    for len in stated_length + 1..=dav {
        census.extend(restricted_atom_census(group, len, refl_set, cfg)?.expanded());
    }

    // Non-existence across mixed support: no atom may carry `bound` or more
    // reflection terms.
    let mut checked_lengths = Vec::new();
    let mut violations = Vec::new();
    for len in bound..=dav {
        checked_lengths.push(len);
        for counts in max_atom_census(group, len, cfg)?.expanded() {
            let refl_part: u32 = counts[rotations..].iter().sum();
            if refl_part as usize >= bound {
                violations.push(Sequence::new(group, counts)?);
            }
        }
    }
    let non_existence = Some(NonExistence {
        bound,
        checked_lengths,
        holds: violations.is_empty(),
        violations,
    });
    diff_report(
        group,
        statement,
        stated_length,
        family,
        census,
        non_existence,
    )
}

// ---------------------------------------------------------------------------
// numeric side conditions
// ---------------------------------------------------------------------------

/// Evaluation of the DeVos–Goddyn–Mohar lower bound for `|Sigma_n(S)|` over
/// an abelian group.
#[derive(Clone, Debug)]
pub struct DgmReport {
    /// `|Sigma_n(S)|`, computed exhaustively.
    pub lhs: usize,
    /// `(sum over classes of min(n, multiplicity) - n + 1) * |H|`.
    pub rhs: i64,
    pub holds: bool,
    /// The stabilizer `H` of `Sigma_n(S)`.
    pub stabilizer: ElementSet,
}

/// Checks the DeVos–Goddyn–Mohar inequality for one abelian sequence.
pub fn check_dgm_bound(seq: &Sequence, n: usize) -> Result<DgmReport> {
    let group = seq.group();
    if !group.is_abelian() {
        return Err(Error::domain("the bound is evaluated over abelian groups"));
    }
    if n < 1 || n > seq.len() {
        return Err(Error::domain(format!(
            "n = {n} out of range 1..={}",
            seq.len()
        )));
    }
    let sums = seq.sigma(Some(n))?;
    let stab = group.left_stabilizer(&sums)?;
    let (_, phi) = group.quotient(&stab)?;
    let image = seq.transform(&phi)?;
    let mut total: i64 = 0;
    for &mult in image.counts() {
        total += (mult as usize).min(n) as i64;
    }
    let rhs = (total - n as i64 + 1) * stab.len() as i64;
    let lhs = sums.len();
    Ok(DgmReport {
        lhs,
        rhs,
        holds: lhs as i64 >= rhs,
        stabilizer: stab,
    })
}

/// Smallest `l` such that every sequence of length `l` over the abelian
/// group has a zero-sum subsequence of length `exp(G)`, by exhaustive
/// search over canonical sequences.
pub fn egz_constant(group: &Group) -> Result<usize> {
    egz_constant_with(group, 9)
}

pub fn egz_constant_with(group: &Group, max_order: usize) -> Result<usize> {
    if !group.is_abelian() {
        return Err(Error::domain(
            "the constant is defined here for abelian groups",
        ));
    }
    if group.order() > max_order {
        return Err(Error::capacity(format!(
            "exhaustive search is limited to order {max_order}; raise the guard to override"
        )));
    }
    let order = group.order();
    let exponent = (0..order).map(|e| group.element_order(e)).max().unwrap();
    let auts = group.automorphism_group()?;

    // Monotone in the length, so the first length where no counterexample
    // exists is the answer.
    for len in exponent..=2 * order + 2 {
        if !has_egz_counterexample(group, &auts, len, exponent) {
            return Ok(len);
        }
    }
    Err(Error::capacity(
        "no bound found below 2|G| + 2; the search guard is too small",
    ))
}

/// Looks for a sequence of the given length without a zero-sum subsequence
/// of length `exponent`.
fn has_egz_counterexample(
    group: &Group,
    auts: &[Vec<Element>],
    len: usize,
    exponent: usize,
) -> bool {
    let order = group.order();
    let mut counts = vec![0u32; order];

    fn rec(
        group: &Group,
        auts: &[Vec<Element>],
        pos: usize,
        left: usize,
        exponent: usize,
        counts: &mut Vec<u32>,
    ) -> bool {
        if left == 0 {
            // canonical representatives only; the property is isomorphism
            // invariant
            'auts: for a in auts {
                for j in 0..counts.len() {
                    let image = counts[a[j]];
                    if image < counts[j] {
                        return false;
                    }
                    if image > counts[j] {
                        continue 'auts;
                    }
                }
            }
            let seq = Sequence::new(group, counts.clone()).unwrap();
            let dp = seq.sums_by_cardinality();
            return dp[exponent] & (1u64 << group.identity()) == 0;
        }
        if pos == counts.len() {
            return false;
        }
        for c in 0..=left {
            counts[pos] = c as u32;
            if rec(group, auts, pos + 1, left - c, exponent, counts) {
                return true;
            }
        }
        counts[pos] = 0;
        false
    }

    rec(group, auts, 0, len, exponent, &mut counts)
}
