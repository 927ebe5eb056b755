//! Born-rule models of commuting families of dichotomic observables.
//!
//! This is the only floating-point part of the crate. Operator identities are
//! checked to within [`TAU`]; supports are read off with threshold [`EPSILON`].

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::algebra::Semiring;
use crate::catalog;
use crate::error::{Error, Result};
use crate::kspec::{Graph, VectorFamily};
use crate::model::EmpiricalModel;
use crate::rational::{self, Rational};
use crate::scenario::{Scenario, Section};

pub const TAU: f64 = 1e-9;
pub const EPSILON: f64 = 1e-6;

pub type C64 = Complex64;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix(DMatrix::identity(dim, dim))
    }

    /// Row-major entries.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidOperator("dimension must be at least 1".into()));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(n, r.len()));
        }
        if rows.iter().flatten().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("non-finite entry".into()));
        }
        Ok(ComplexMatrix(DMatrix::from_fn(n, n, |i, j| rows[i][j])))
    }

    /// `|v⟩⟨v| / ⟨v|v⟩`.
    pub fn projector_onto(v: &[C64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm <= TAU {
            return Err(Error::InvalidOperator("cannot project onto the zero vector".into()));
        }
        let n = v.len();
        Ok(ComplexMatrix(DMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj() / norm)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn mul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 * &other.0)
    }

    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &other.0)
    }

    pub fn scale(&self, z: C64) -> ComplexMatrix {
        ComplexMatrix(&self.0 * z)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `Tr(self · other)` without forming the product.
    pub fn trace_of_product(&self, other: &ComplexMatrix) -> C64 {
        let n = self.dim();
        let mut t = C64::default();
        for i in 0..n {
            for j in 0..n {
                t += self.0[(i, j)] * other.0[(j, i)];
            }
        }
        t
    }

    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(self.0.kronecker(&other.0))
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn distance(&self, other: &ComplexMatrix) -> f64 {
        self.sub(other).max_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.distance(&self.adjoint()) <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.distance(&self.mul(self)) <= tol
    }

    pub fn commutes_with(&self, other: &ComplexMatrix, tol: f64) -> bool {
        self.mul(other).distance(&other.mul(self)) <= tol
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.0.clone().symmetric_eigenvalues().iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// A dimension line, then one row per line of `re,im` entries (a bare
    /// `re` is read as real). `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (n0, header) = lines.next().ok_or_else(|| Error::parse("line 1", "missing dimension"))?;
        let dim: usize = header
            .trim_start_matches("dim")
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("line {n0}"), format!("bad dimension `{header}`")))?;
        let mut rows = Vec::with_capacity(dim);
        for (n, line) in lines {
            let row = line
                .split_whitespace()
                .enumerate()
                .map(|(k, tok)| parse_complex(tok).ok_or_else(|| Error::parse(format!("line {n}, entry {}", k + 1), format!("bad complex number `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            if row.len() != dim {
                return Err(Error::parse(format!("line {n}"), format!("expected {dim} entries, found {}", row.len())));
            }
            rows.push(row);
        }
        if rows.len() != dim {
            return Err(Error::parse("end of input", format!("expected {dim} rows, found {}", rows.len())));
        }
        ComplexMatrix::from_rows(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.dim());
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim()).map(|j| format!("{},{}", self.0[(i, j)].re, self.0[(i, j)].im)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

fn parse_complex(tok: &str) -> Option<C64> {
    match tok.split_once(',') {
        Some((re, im)) => Some(c(re.parse().ok()?, im.parse().ok()?)),
        None => Some(c(tok.parse().ok()?, 0.0)),
    }
}

/// Projectors `(P0, P1)` with `P0 + P1 = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct DichotomicObservable {
    label: String,
    projectors: [ComplexMatrix; 2],
}

impl DichotomicObservable {
    pub fn new(label: impl Into<String>, p0: ComplexMatrix, p1: ComplexMatrix) -> Result<Self> {
        let label = label.into();
        if p0.dim() != p1.dim() {
            return Err(Error::DimensionMismatch(p0.dim(), p1.dim()));
        }
        if !p0.is_projector(TAU) || !p1.is_projector(TAU) {
            return Err(Error::InvalidOperator(format!("`{label}`: outcome operators must be projectors")));
        }
        if p0.add(&p1).distance(&ComplexMatrix::identity(p0.dim())) > TAU {
            return Err(Error::InvalidOperator(format!("`{label}`: projectors do not sum to the identity")));
        }
        Ok(DichotomicObservable { label, projectors: [p0, p1] })
    }

    /// Outcome 1 is `p1`, outcome 0 its complement.
    pub fn from_projector(label: impl Into<String>, p1: ComplexMatrix) -> Result<Self> {
        let p0 = ComplexMatrix::identity(p1.dim()).sub(&p1);
        DichotomicObservable::new(label, p0, p1)
    }

    /// A qubit observable from an orthonormal basis, outcome `o` projecting onto `basis[o]`.
    pub fn qubit(label: impl Into<String>, basis: [[C64; 2]; 2]) -> Result<Self> {
        DichotomicObservable::new(label, ComplexMatrix::projector_onto(&basis[0])?, ComplexMatrix::projector_onto(&basis[1])?)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn projector(&self, outcome: usize) -> &ComplexMatrix {
        &self.projectors[outcome]
    }

    /// `I ⊗ ··· ⊗ A ⊗ ··· ⊗ I` with `A` at `site` of `sites` equal factors.
    pub fn extend(&self, label: impl Into<String>, site: usize, sites: usize) -> DichotomicObservable {
        assert!(site < sites);
        let id = ComplexMatrix::identity(self.dim());
        let lift = |p: &ComplexMatrix| {
            (0..sites).fold(ComplexMatrix::identity(1), |acc, k| acc.kron(if k == site { p } else { &id }))
        };
        DichotomicObservable {
            label: label.into(),
            projectors: [lift(&self.projectors[0]), lift(&self.projectors[1])],
        }
    }

    pub fn commutes_with(&self, other: &DichotomicObservable, tol: f64) -> bool {
        self.projectors[1].commutes_with(&other.projectors[1], tol)
    }
}

/// A density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    rho: ComplexMatrix,
}

impl QuantumState {
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        if !rho.is_hermitian(TAU) {
            return Err(Error::InvalidOperator("density matrix is not Hermitian".into()));
        }
        if (rho.trace() - c(1.0, 0.0)).norm() > TAU {
            return Err(Error::InvalidOperator(format!("density matrix has trace {}", rho.trace())));
        }
        if let Some(&low) = rho.hermitian_eigenvalues().first() {
            if low < -TAU {
                return Err(Error::InvalidOperator(format!("density matrix has eigenvalue {low}")));
            }
        }
        Ok(QuantumState { rho })
    }

    /// `|ψ⟩⟨ψ|` for `ψ` normalized.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        QuantumState::new(ComplexMatrix::projector_onto(psi)?)
    }

    /// Tensor product of pure single-site states.
    pub fn product(factors: &[Vec<C64>]) -> Result<Self> {
        let psi = factors.iter().fold(vec![c(1.0, 0.0)], |acc, f| {
            acc.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect()
        });
        QuantumState::pure(&psi)
    }

    /// Pure state with independent Gaussian amplitudes.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Self {
        QuantumState::pure(&random_vector(rng, dim)).expect("a Gaussian vector is almost surely non-zero")
    }

    /// Mixture of `rank` random pure states with random weights.
    pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> Self {
        let weights: Vec<f64> = (0..rank).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = weights.iter().sum();
        let mut rho = ComplexMatrix::zeros(dim);
        for w in weights {
            let p = ComplexMatrix::projector_onto(&random_vector(rng, dim)).expect("non-zero vector");
            rho = rho.add(&p.scale(c(w / total, 0.0)));
        }
        let rho = rho.add(&rho.adjoint()).scale(c(0.5, 0.0));
        let t = rho.trace().re;
        QuantumState::new(rho.scale(c(1.0 / t, 0.0))).expect("a mixture of pure states is a state")
    }

    pub fn density(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.dim()
    }
}

fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<C64> {
    (0..dim).map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

/// Maximal commuting subsets as a cover, outcomes `0`/`1`.
pub fn commuting_cover(observables: &[DichotomicObservable]) -> Result<Scenario> {
    let dim = observables.first().map(DichotomicObservable::dim).unwrap_or(0);
    if let Some(o) = observables.iter().find(|o| o.dim() != dim) {
        return Err(Error::DimensionMismatch(dim, o.dim()));
    }
    let mut edges = Vec::new();
    for i in 0..observables.len() {
        for j in i + 1..observables.len() {
            if observables[i].commutes_with(&observables[j], TAU) {
                edges.push((i, j));
            }
        }
    }
    let labels: Vec<&str> = observables.iter().map(DichotomicObservable::label).collect();
    Graph::new(&labels, &edges)?.clique_cover()
}

/// `P_s = P_{m_1}^{s(m_1)} ··· P_{m_k}^{s(m_k)}` in the order given.
pub fn section_projector(observables: &[&DichotomicObservable], values: &[usize]) -> ComplexMatrix {
    assert_eq!(observables.len(), values.len());
    let dim = observables.first().map_or(1, |o| o.dim());
    observables
        .iter()
        .zip(values)
        .fold(ComplexMatrix::identity(dim), |acc, (o, &v)| acc.mul(o.projector(v)))
}

/// `max |Σ_s P_s − I|` over the sections of `context`.
pub fn resolution_of_identity(observables: &[DichotomicObservable], context: &[usize]) -> f64 {
    let dim = observables[context[0]].dim();
    let ops: Vec<&DichotomicObservable> = context.iter().map(|&m| &observables[m]).collect();
    let mut total = ComplexMatrix::zeros(dim);
    for s in crate::scenario::sections(context, 2) {
        total = total.add(&section_projector(&ops, s.values()));
    }
    total.distance(&ComplexMatrix::identity(dim))
}

/// An empirical model with floating-point weights, not checked for compatibility.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatModel {
    scenario: Scenario,
    tables: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloatViolation {
    pub contexts: (usize, usize),
    pub section: Section,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FloatCompatibilityReport {
    pub violations: Vec<FloatViolation>,
    /// Largest marginal discrepancy seen, violating or not.
    pub max_deviation: f64,
}

impl FloatCompatibilityReport {
    pub fn is_compatible(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FloatModel {
    pub fn new(scenario: Scenario, tables: Vec<Vec<f64>>) -> Result<Self> {
        if tables.len() != scenario.cover().len() {
            return Err(Error::InvalidDistribution(format!("{} tables for {} contexts", tables.len(), scenario.cover().len())));
        }
        for (c, t) in tables.iter().enumerate() {
            let want = scenario.outcome_count().pow(scenario.context(c).len() as u32);
            if t.len() != want {
                return Err(Error::InvalidDistribution(format!("context {c}: {} weights, expected {want}", t.len())));
            }
        }
        Ok(FloatModel { scenario, tables })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[Vec<f64>] {
        &self.tables
    }

    pub fn table(&self, c: usize) -> &[f64] {
        &self.tables[c]
    }

    /// Marginal of context `c`'s table on `target ⊆ C`.
    pub fn marginal(&self, c: usize, target: &[usize]) -> Vec<f64> {
        let l = self.scenario.outcome_count();
        let mut out = vec![0.0; l.pow(target.len() as u32)];
        for (i, s) in self.scenario.sections(self.scenario.context(c)).iter().enumerate() {
            out[s.restricted_index(target, l)] += self.tables[c][i];
        }
        out
    }

    /// Largest entrywise difference from an exact model on the same scenario.
    pub fn max_deviation(&self, exact: &EmpiricalModel) -> f64 {
        assert_eq!(&self.scenario, exact.scenario());
        self.tables
            .iter()
            .zip(exact.tables())
            .flat_map(|(f, e)| f.iter().enumerate().map(move |(i, w)| (w - rational::to_f64(&e.weight(i))).abs()))
            .fold(0.0, f64::max)
    }

    /// Boolean model of the weights above `epsilon`.
    pub fn support(&self, epsilon: f64) -> Result<EmpiricalModel> {
        let rows: Vec<Vec<Rational>> = self
            .tables
            .iter()
            .map(|t| t.iter().map(|&w| rational::int(i64::from(w > epsilon))).collect())
            .collect();
        EmpiricalModel::from_rows(self.scenario.clone(), Semiring::Boolean, rows)
    }

    /// Rounds each weight to the nearest fraction with denominator at most
    /// `max_denominator`, then re-checks normalization and compatibility exactly.
    pub fn to_exact(&self, max_denominator: u64) -> Result<EmpiricalModel> {
        let mut rows = Vec::with_capacity(self.tables.len());
        for t in &self.tables {
            let mut row = Vec::with_capacity(t.len());
            for &w in t {
                let r = rational::approximate(w, max_denominator)
                    .ok_or_else(|| Error::Conversion(format!("weight {w} is not finite")))?;
                if (rational::to_f64(&r) - w).abs() > EPSILON {
                    return Err(Error::Conversion(format!("weight {w} has no fraction with denominator ≤ {max_denominator} within {EPSILON}")));
                }
                row.push(r);
            }
            rows.push(row);
        }
        EmpiricalModel::from_rows(self.scenario.clone(), Semiring::NonNegative, rows).map_err(|e| Error::Conversion(e.to_string()))
    }
}

impl fmt::Display for FloatModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, t) in self.tables.iter().enumerate() {
            let weights: Vec<String> = t.iter().map(|w| format!("{w:.6}")).collect();
            writeln!(f, "({})  {}", self.scenario.context_labels(c).join(", "), weights.join("  "))?;
        }
        Ok(())
    }
}

/// Compares every pair of contexts on their overlap.
pub fn check_generalized_no_signalling(model: &FloatModel, tol: f64) -> FloatCompatibilityReport {
    let scenario = &model.scenario;
    let l = scenario.outcome_count();
    let mut report = FloatCompatibilityReport::default();
    let cover = scenario.cover();
    for a in 0..cover.len() {
        for b in a + 1..cover.len() {
            let overlap: Vec<usize> = cover[a].iter().copied().filter(|m| cover[b].binary_search(m).is_ok()).collect();
            if overlap.is_empty() {
                continue;
            }
            let (left, right) = (model.marginal(a, &overlap), model.marginal(b, &overlap));
            for (i, (x, y)) in left.iter().zip(&right).enumerate() {
                let d = (x - y).abs();
                report.max_deviation = report.max_deviation.max(d);
                if d > tol {
                    report.violations.push(FloatViolation {
                        contexts: (a, b),
                        section: Section::from_index(&overlap, i, l),
                        left: *x,
                        right: *y,
                    });
                }
            }
        }
    }
    report
}

/// `ρ_C(s) = Tr(ρ P_s)` for every context of `scenario`, whose measurements
/// are `observables` in order.
pub fn born_model(state: &QuantumState, observables: &[DichotomicObservable], scenario: &Scenario) -> Result<FloatModel> {
    if observables.len() != scenario.measurement_count() {
        return Err(Error::InvalidArgument(format!("{} observables for {} measurements", observables.len(), scenario.measurement_count())));
    }
    if let Some((o, m)) = observables.iter().zip(scenario.measurements()).find(|(o, m)| o.label() != m.as_str()) {
        return Err(Error::InvalidArgument(format!("observable `{}` where measurement `{m}` was expected", o.label())));
    }
    if scenario.outcome_count() != 2 {
        return Err(Error::NotDichotomic(scenario.outcome_count()));
    }
    if let Some(o) = observables.iter().find(|o| o.dim() != state.dim()) {
        return Err(Error::DimensionMismatch(state.dim(), o.dim()));
    }
    let mut tables = Vec::with_capacity(scenario.cover().len());
    for (ci, context) in scenario.cover().iter().enumerate() {
        for (i, &a) in context.iter().enumerate() {
            for &b in &context[i + 1..] {
                if !observables[a].commutes_with(&observables[b], TAU) {
                    return Err(Error::NonCommuting(observables[a].label.clone(), observables[b].label.clone()));
                }
            }
        }
        let ops: Vec<&DichotomicObservable> = context.iter().map(|&m| &observables[m]).collect();
        let mut table = vec![0.0; 1 << context.len()];
        born_prefix(&ops, state.density(), 0, 0, &mut table);
        if let Some(&w) = table.iter().find(|&&w| w < -TAU) {
            return Err(Error::NegativeWeight { context: ci, weight: w });
        }
        tables.push(table);
    }
    FloatModel::new(scenario.clone(), tables)
}

/// Extends the prefix product `ρ P_{m_1} ··· P_{m_j}` one measurement at a time.
fn born_prefix(ops: &[&DichotomicObservable], prefix: &ComplexMatrix, depth: usize, index: usize, table: &mut [f64]) {
    let last = depth + 1 == ops.len();
    for o in 0..2 {
        let p = ops[depth].projector(o);
        let index = index + (o << depth);
        if last {
            table[index] = prefix.trace_of_product(p).re;
        } else {
            born_prefix(ops, &prefix.mul(p), depth + 1, index, table);
        }
    }
}

fn s2() -> f64 {
    std::f64::consts::FRAC_1_SQRT_2
}

/// `X` basis: outcome 0 is `(|↑⟩ + |↓⟩)/√2`, outcome 1 is `(|↑⟩ − |↓⟩)/√2`.
pub fn x_basis() -> [[C64; 2]; 2] {
    [[c(s2(), 0.0), c(s2(), 0.0)], [c(s2(), 0.0), c(-s2(), 0.0)]]
}

/// `Y` basis: outcome 0 is `(|↑⟩ + i|↓⟩)/√2`, outcome 1 is `(|↑⟩ − i|↓⟩)/√2`.
pub fn y_basis() -> [[C64; 2]; 2] {
    [[c(s2(), 0.0), c(0.0, s2())], [c(s2(), 0.0), c(0.0, -s2())]]
}

/// `(|↑···↑⟩ + |↓···↓⟩)/√2`.
pub fn ghz_state(n: usize) -> Result<QuantumState> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ states need n ≥ 2".into()));
    }
    let mut psi = vec![C64::default(); 1 << n];
    psi[0] = c(s2(), 0.0);
    psi[(1 << n) - 1] = c(s2(), 0.0);
    QuantumState::pure(&psi)
}

/// `X_1, Y_1, …, X_n, Y_n`, each acting on its own qubit.
pub fn ghz_observables(n: usize) -> Result<Vec<DichotomicObservable>> {
    if n < 2 {
        return Err(Error::InvalidArgument("GHZ observables need n ≥ 2".into()));
    }
    let x = DichotomicObservable::qubit("X", x_basis())?;
    let y = DichotomicObservable::qubit("Y", y_basis())?;
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        out.push(x.extend(format!("X{}", i + 1), i, n));
        out.push(y.extend(format!("Y{}", i + 1), i, n));
    }
    Ok(out)
}

/// Born model of the GHZ state over the catalog GHZ scenario.
pub fn ghz_born_model(n: usize) -> Result<FloatModel> {
    born_model(&ghz_state(n)?, &ghz_observables(n)?, &catalog::ghz_scenario(n)?)
}

/// Qubit observable along a uniformly random axis of the Bloch sphere.
pub fn random_qubit_observable<R: Rng + ?Sized>(rng: &mut R, label: impl Into<String>) -> DichotomicObservable {
    let v = random_vector(rng, 2);
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    let up = [v[0] / norm, v[1] / norm];
    let down = [-up[1].conj(), up[0].conj()];
    DichotomicObservable::qubit(label, [up, down]).expect("orthonormal qubit basis")
}

fn ray_observables(vectors: &VectorFamily) -> Result<Vec<DichotomicObservable>> {
    vectors
        .labels()
        .iter()
        .zip(vectors.vectors())
        .map(|(label, v)| {
            let ray: Vec<C64> = v.iter().map(|&x| c(x as f64, 0.0)).collect();
            DichotomicObservable::from_projector(label.clone(), ComplexMatrix::projector_onto(&ray)?)
        })
        .collect()
}

/// Ray projectors with outcome 1 meaning "this ray fired", over the cover of
/// orthogonal bases drawn from the family.
pub fn ks_observables(vectors: &VectorFamily) -> Result<(Vec<DichotomicObservable>, Scenario)> {
    let cover = vectors.basis_cover()?;
    Ok((ray_observables(vectors)?, cover))
}

/// As [`ks_observables`], with maximal commuting sets as contexts; these need
/// not be complete bases.
pub fn ks_observables_lenient(vectors: &VectorFamily) -> Result<(Vec<DichotomicObservable>, Scenario)> {
    let observables = ray_observables(vectors)?;
    let cover = commuting_cover(&observables)?;
    Ok((observables, cover))
}
