//! Exact Gaussian elimination over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Sorted `(column, coefficient)` pairs with no zero coefficients.
pub type SparseRow = Vec<(usize, Rational)>;

/// `A x = b` with sparse rows.
///
/// An optional pivot hint lists `(row, column)` pairs that form a
/// lower-triangular block when taken in order; the solver uses it for forward
/// substitution and falls back to general elimination if the hint is wrong.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    columns: usize,
    rows: Vec<SparseRow>,
    rhs: Vec<Rational>,
    pivot_hint: Option<Vec<(usize, usize)>>,
}

impl LinearSystem {
    pub fn new(columns: usize) -> Self {
        LinearSystem { columns, rows: Vec::new(), rhs: Vec::new(), pivot_hint: None }
    }

    pub fn from_dense(rows: &[Vec<Rational>], rhs: Vec<Rational>) -> Self {
        assert_eq!(rows.len(), rhs.len(), "one right-hand side per row");
        let columns = rows.first().map_or(0, |r| r.len());
        let mut system = LinearSystem::new(columns);
        for (row, b) in rows.iter().zip(rhs) {
            assert_eq!(row.len(), columns, "ragged matrix");
            let sparse = row.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect();
            system.push_row(sparse, b);
        }
        system
    }

    pub fn push_row(&mut self, mut coeffs: SparseRow, rhs: Rational) {
        coeffs.retain(|(_, v)| !v.is_zero());
        coeffs.sort_by_key(|(j, _)| *j);
        assert!(coeffs.windows(2).all(|w| w[0].0 < w[1].0), "repeated column in row");
        assert!(coeffs.last().is_none_or(|(j, _)| *j < self.columns), "column out of range");
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn with_pivot_hint(mut self, hint: Vec<(usize, usize)>) -> Self {
        self.pivot_hint = Some(hint);
        self
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn pivot_hint(&self) -> Option<&[(usize, usize)]> {
        self.pivot_hint.as_deref()
    }

    /// `b − A x`.
    pub fn residual(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().fold(b.clone(), |acc, (j, a)| acc - a * &x[*j]))
            .collect()
    }

    pub fn is_solved_by(&self, x: &[Rational]) -> bool {
        x.len() == self.columns && self.residual(x).iter().all(Zero::is_zero)
    }

    /// `(yᵀA, yᵀb)` for a sparse row combination `y`.
    pub fn combine(&self, y: &[(usize, Rational)]) -> (Vec<Rational>, Rational) {
        let mut lhs = vec![Rational::zero(); self.columns];
        let mut rhs = Rational::zero();
        for (i, c) in y {
            for (j, a) in &self.rows[*i] {
                lhs[*j] += c * a;
            }
            rhs += c * &self.rhs[*i];
        }
        (lhs, rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSolution {
    /// Free variables set to zero.
    pub particular: Vec<Rational>,
    pub rank: usize,
    pub nullity: usize,
}

/// A row combination `y` with `yᵀA = 0` and `yᵀb ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inconsistency {
    pub certificate: Vec<(usize, Rational)>,
    pub value: Rational,
}

impl Inconsistency {
    pub fn verify(&self, system: &LinearSystem) -> bool {
        let (lhs, rhs) = system.combine(&self.certificate);
        lhs.iter().all(Zero::is_zero) && rhs == self.value && !rhs.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignedOutcome {
    Solvable(SignedSolution),
    Unsolvable(Inconsistency),
}

impl SignedOutcome {
    pub fn solution(&self) -> Option<&SignedSolution> {
        match self {
            SignedOutcome::Solvable(s) => Some(s),
            SignedOutcome::Unsolvable(_) => None,
        }
    }

    pub fn is_solvable(&self) -> bool {
        matches!(self, SignedOutcome::Solvable(_))
    }
}

/// Solves `A x = b` over the rationals.
pub fn solve_signed(system: &LinearSystem) -> SignedOutcome {
    if let Some(outcome) = structured(system) {
        return outcome;
    }
    general(system)
}

fn general(system: &LinearSystem) -> SignedOutcome {
    let m = system.rows.len();
    let mut rows = system.rows.clone();
    let mut rhs = system.rhs.clone();
    let mut combos: Vec<SparseRow> = (0..m).map(|i| vec![(i, Rational::one())]).collect();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); system.columns];
    let mut empty = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        match row.first() {
            Some((j, _)) => buckets[*j].push(i),
            None => empty.push(i),
        }
    }
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    for col in 0..system.columns {
        let candidates = std::mem::take(&mut buckets[col]);
        let Some(&p) = candidates.iter().min_by_key(|&&i| rows[i].len()) else {
            continue;
        };
        let pivot_row = rows[p].clone();
        let pivot_rhs = rhs[p].clone();
        let pivot_combo = combos[p].clone();
        let lead = pivot_row[0].1.clone();
        for &i in candidates.iter().filter(|&&i| i != p) {
            let f = &rows[i][0].1 / &lead;
            rows[i] = axpy(&rows[i], &f, &pivot_row);
            rhs[i] -= &f * &pivot_rhs;
            combos[i] = axpy(&combos[i], &f, &pivot_combo);
            match rows[i].first() {
                Some((j, _)) => buckets[*j].push(i),
                None => empty.push(i),
            }
        }
        pivots.push((p, col));
    }
    if let Some(&i) = empty.iter().filter(|&&i| !rhs[i].is_zero()).min() {
        return SignedOutcome::Unsolvable(Inconsistency {
            certificate: std::mem::take(&mut combos[i]),
            value: rhs[i].clone(),
        });
    }
    let mut x = vec![Rational::zero(); system.columns];
    for &(p, col) in pivots.iter().rev() {
        let row = &rows[p];
        let mut v = rhs[p].clone();
        for (j, a) in &row[1..] {
            v -= a * &x[*j];
        }
        x[col] = v / &row[0].1;
    }
    let rank = pivots.len();
    SignedOutcome::Solvable(SignedSolution { particular: x, rank, nullity: system.columns - rank })
}

/// `target − f·source` on sorted sparse rows.
fn axpy(target: &SparseRow, f: &Rational, source: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < source.len() {
        let ti = target.get(i).map_or(usize::MAX, |e| e.0);
        let sj = source.get(j).map_or(usize::MAX, |e| e.0);
        if ti < sj {
            out.push(target[i].clone());
            i += 1;
        } else if sj < ti {
            out.push((sj, -(f * &source[j].1)));
            j += 1;
        } else {
            let v = &target[i].1 - f * &source[j].1;
            if !v.is_zero() {
                out.push((ti, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Forward substitution along the pivot hint, then a span check of every other row.
///
/// Returns `None` whenever the hint does not apply, so the caller can fall back.
fn structured(system: &LinearSystem) -> Option<SignedOutcome> {
    let hint = system.pivot_hint.as_ref()?;
    let n = system.columns;
    let mut position = vec![usize::MAX; n];
    let mut is_pivot_row = vec![false; system.rows.len()];
    for (k, &(r, c)) in hint.iter().enumerate() {
        if r >= system.rows.len() || c >= n || position[c] != usize::MAX || is_pivot_row[r] {
            return None;
        }
        position[c] = k;
        is_pivot_row[r] = true;
    }
    let mut diag = Vec::with_capacity(hint.len());
    for (k, &(r, c)) in hint.iter().enumerate() {
        let mut d = None;
        for (j, a) in &system.rows[r] {
            let pj = position[*j];
            if *j == c {
                d = Some(a.clone());
            } else if pj != usize::MAX && pj > k {
                return None;
            }
        }
        diag.push(d?);
    }

    let mut x = vec![Rational::zero(); n];
    for (k, &(r, c)) in hint.iter().enumerate() {
        let mut v = system.rhs[r].clone();
        for (j, a) in &system.rows[r] {
            if *j != c && position[*j] != usize::MAX {
                v -= a * &x[*j];
            }
        }
        x[c] = v / &diag[k];
    }

    let reducer = Reducer::new(system, hint, &position, &diag);
    let mut certificate = None;
    for (i, &pivot) in is_pivot_row.iter().enumerate() {
        if pivot {
            continue;
        }
        let factors = reducer.reduce(i)?;
        if certificate.is_none() {
            let value = factors.iter().fold(system.rhs[i].clone(), |acc, (k, f)| acc - f * &system.rhs[hint[*k].0]);
            if !value.is_zero() {
                let mut y: SparseRow = factors.iter().map(|(k, f)| (hint[*k].0, -f.clone())).collect();
                y.push((i, Rational::one()));
                y.sort_by_key(|e| e.0);
                certificate = Some(Inconsistency { certificate: y, value });
            }
        }
    }
    if let Some(c) = certificate {
        return c.verify(system).then_some(SignedOutcome::Unsolvable(c));
    }
    if !system.is_solved_by(&x) {
        return None;
    }
    let rank = hint.len();
    Some(SignedOutcome::Solvable(SignedSolution { particular: x, rank, nullity: n - rank }))
}

/// Expresses rows as combinations of the hinted rows, eliminating hinted
/// columns from the last pivot down to the first.
struct Reducer<'a> {
    system: &'a LinearSystem,
    hint: &'a [(usize, usize)],
    position: &'a [usize],
    diag: &'a [Rational],
    small: Option<Vec<Vec<(usize, i64)>>>,
}

impl<'a> Reducer<'a> {
    fn new(system: &'a LinearSystem, hint: &'a [(usize, usize)], position: &'a [usize], diag: &'a [Rational]) -> Self {
        let unit = diag.iter().all(|d| d.is_integer() && d.numer().abs().is_one());
        let small = unit
            .then(|| {
                system
                    .rows
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|(j, a)| if a.is_integer() { a.numer().to_i64().map(|v| (*j, v)) } else { None })
                            .collect::<Option<Vec<_>>>()
                    })
                    .collect::<Option<Vec<_>>>()
            })
            .flatten();
        Reducer { system, hint, position, diag, small }
    }

    /// Factors `f_k` with `row_i = Σ f_k row_{hint_k}`, or `None` if row `i` is outside the span.
    fn reduce(&self, i: usize) -> Option<Vec<(usize, Rational)>> {
        if let Some(small) = &self.small {
            if let Some(result) = self.reduce_small(small, i) {
                return result;
            }
        }
        self.reduce_exact(i)
    }

    fn reduce_small(&self, rows: &[Vec<(usize, i64)>], i: usize) -> Option<Option<Vec<(usize, Rational)>>> {
        let mut pivots = BTreeMap::<usize, i128>::new();
        let mut others = BTreeMap::<usize, i128>::new();
        for &(j, a) in &rows[i] {
            self.slot(&mut pivots, &mut others, j, a as i128, 0)?;
        }
        let mut factors = Vec::new();
        while let Some((k, v)) = pivots.pop_last() {
            if v == 0 {
                continue;
            }
            let f = v * self.diag[k].numer().to_i64()? as i128;
            for &(j, a) in &rows[self.hint[k].0] {
                if self.position[j] != k {
                    self.slot(&mut pivots, &mut others, j, 0, f.checked_mul(a as i128)?)?;
                }
            }
            factors.push((k, Rational::from_integer(BigInt::from(f))));
        }
        Some(others.values().all(|v| *v == 0).then_some(factors))
    }

    /// Adds `add − sub` to column `j` of the split accumulator.
    fn slot(
        &self,
        pivots: &mut BTreeMap<usize, i128>,
        others: &mut BTreeMap<usize, i128>,
        j: usize,
        add: i128,
        sub: i128,
    ) -> Option<()> {
        let k = self.position[j];
        let e = if k == usize::MAX { others.entry(j).or_insert(0) } else { pivots.entry(k).or_insert(0) };
        *e = e.checked_add(add)?.checked_sub(sub)?;
        Some(())
    }

    fn reduce_exact(&self, i: usize) -> Option<Vec<(usize, Rational)>> {
        let mut pivots = BTreeMap::<usize, Rational>::new();
        let mut others = BTreeMap::<usize, Rational>::new();
        let add = |pivots: &mut BTreeMap<usize, Rational>, others: &mut BTreeMap<usize, Rational>, j: usize, v: Rational| {
            let k = self.position[j];
            let e = if k == usize::MAX { others.entry(j) } else { pivots.entry(k) };
            *e.or_insert_with(Rational::zero) += v;
        };
        for (j, a) in &self.system.rows[i] {
            add(&mut pivots, &mut others, *j, a.clone());
        }
        let mut factors = Vec::new();
        while let Some((k, v)) = pivots.pop_last() {
            if v.is_zero() {
                continue;
            }
            let f = v / &self.diag[k];
            for (j, a) in &self.system.rows[self.hint[k].0] {
                if self.position[*j] != k {
                    add(&mut pivots, &mut others, *j, -(&f * a));
                }
            }
            factors.push((k, f));
        }
        others.values().all(Zero::is_zero).then_some(factors)
    }
}

/// Field operations that may refuse (overflow) so a fast path can bail out.
trait Scalar: Clone + PartialEq {
    fn vanishes(&self) -> bool;
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self>;
    fn div(&self, other: &Self) -> Option<Self>;
}

impl Scalar for Ratio<i64> {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        self.checked_sub(&f.checked_mul(x)?)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        self.checked_div(other)
    }
}

impl Scalar for Rational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn sub_mul(&self, f: &Self, x: &Self) -> Option<Self> {
        Some(self - f * x)
    }
    fn div(&self, other: &Self) -> Option<Self> {
        Some(self / other)
    }
}

fn eliminate_rank<F: Scalar>(mut rows: Vec<Vec<(usize, F)>>, columns: usize) -> Option<usize> {
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); columns];
    for (i, row) in rows.iter().enumerate() {
        if let Some((j, _)) = row.first() {
            buckets[*j].push(i);
        }
    }
    let mut rank = 0;
    for col in 0..columns {
        let candidates = std::mem::take(&mut buckets[col]);
        let Some(&p) = candidates.iter().min_by_key(|&&i| rows[i].len()) else {
            continue;
        };
        rank += 1;
        let pivot = rows[p].clone();
        for &i in candidates.iter().filter(|&&i| i != p) {
            let f = rows[i][0].1.div(&pivot[0].1)?;
            let target = std::mem::take(&mut rows[i]);
            let mut out = Vec::with_capacity(target.len() + pivot.len());
            let (mut a, mut b) = (1, 1);
            while a < target.len() || b < pivot.len() {
                let ta = target.get(a).map_or(usize::MAX, |e| e.0);
                let pb = pivot.get(b).map_or(usize::MAX, |e| e.0);
                if ta < pb {
                    out.push(target[a].clone());
                    a += 1;
                } else {
                    let base = if ta == pb { target[a].1.clone() } else { zero_like(&pivot[b].1) };
                    let v = base.sub_mul(&f, &pivot[b].1)?;
                    if !v.vanishes() {
                        out.push((pb, v));
                    }
                    if ta == pb {
                        a += 1;
                    }
                    b += 1;
                }
            }
            if let Some((j, _)) = out.first() {
                buckets[*j].push(i);
            }
            rows[i] = out;
        }
    }
    Some(rank)
}

fn zero_like<F: Scalar>(x: &F) -> F {
    x.sub_mul(&one_like(x), x).expect("x − x")
}

fn one_like<F: Scalar>(x: &F) -> F {
    x.div(x).expect("nonzero pivot")
}

type SmallRow = Vec<(usize, Ratio<i64>)>;

/// Exact rank of a sparse rational matrix.
pub fn rank(rows: &[SparseRow], columns: usize) -> usize {
    let small: Option<Vec<SmallRow>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|(j, v)| Some((*j, Ratio::new(v.numer().to_i64()?, v.denom().to_i64()?))))
                .collect()
        })
        .collect();
    if let Some(small) = small {
        if let Some(r) = eliminate_rank(small, columns) {
            return r;
        }
    }
    eliminate_rank(rows.to_vec(), columns).expect("exact arithmetic never overflows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn dense(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn solves_small_system() {
        let a = dense(&[&[2, 1, 0], &[1, 1, 1], &[3, 2, 1]]);
        let b = vec![int(3), int(3), int(6)];
        let system = LinearSystem::from_dense(&a, b);
        let SignedOutcome::Solvable(s) = solve_signed(&system) else { panic!("consistent") };
        assert!(system.is_solved_by(&s.particular));
        assert_eq!((s.rank, s.nullity), (2, 1));
        assert_eq!(s.particular[2], int(0));
    }

    #[test]
    fn certificate_for_inconsistent_system() {
        let a = dense(&[&[1, 1], &[1, 1], &[0, 1]]);
        let system = LinearSystem::from_dense(&a, vec![int(1), int(2), rat(1, 2)]);
        let SignedOutcome::Unsolvable(c) = solve_signed(&system) else { panic!("inconsistent") };
        assert!(c.verify(&system));
    }

    #[test]
    fn wrong_hint_falls_back() {
        let a = dense(&[&[1, 1], &[0, 1]]);
        let system = LinearSystem::from_dense(&a, vec![int(3), int(1)]).with_pivot_hint(vec![(0, 0), (1, 1)]);
        let SignedOutcome::Solvable(s) = solve_signed(&system) else { panic!() };
        assert_eq!(s.particular, vec![int(2), int(1)]);
    }

    #[test]
    fn rank_small_and_overflowing() {
        let a = dense(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let rows: Vec<SparseRow> = a
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect())
            .collect();
        assert_eq!(rank(&rows, 3), 2);
        let big = int(i64::MAX) * int(4);
        let rows = vec![vec![(0, big.clone()), (1, int(1))], vec![(0, int(1)), (1, big)]];
        assert_eq!(rank(&rows, 2), 2);
    }
}
