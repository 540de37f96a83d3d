//! Truncated Fock-space linear algebra: ladder operators, tensor products,
//! states, expectations, commutators.
//!
//! Basis ordering for tensor products is fixed with the left factor varying
//! slowest, i.e. the composite index of `(i, j)` on `d1 (x) d2` is
//! `i * d2 + j`. Exact canonical commutation is impossible in finite
//! dimension; the deviation is confined to the top basis state of each
//! factor, so checks restrict themselves to the "lower block" of indices
//! whose digits all stay below `d - 1`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{CoreError, Result};

/// Default cap on composite dimensions created by tensor products.
pub const DEFAULT_DIM_LIMIT: usize = 4096;

/// A single truncated oscillator with basis |0> .. |d-1>.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(CoreError::DimensionMismatch(format!(
                "Fock cutoff must be at least 2, got {dim}"
            )));
        }
        Ok(Self { dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// A product of truncated oscillators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertSpace {
    factors: Vec<usize>,
}

impl HilbertSpace {
    pub fn single(dim: usize) -> Result<Self> {
        FockSpace::new(dim).map(|f| Self {
            factors: vec![f.dim],
        })
    }

    pub fn product(factors: &[usize]) -> Result<Self> {
        if factors.is_empty() {
            return Err(CoreError::DimensionMismatch("empty factor list".into()));
        }
        for &d in factors {
            FockSpace::new(d)?;
        }
        Ok(Self {
            factors: factors.to_vec(),
        })
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().product()
    }

    fn join(&self, other: &HilbertSpace) -> HilbertSpace {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        HilbertSpace { factors }
    }

    /// Decompose a composite basis index into per-factor digits
    /// (left factor slowest).
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0; self.factors.len()];
        for (slot, &d) in self.factors.iter().enumerate().rev() {
            digits[slot] = index % d;
            index /= d;
        }
        digits
    }

    /// True when no digit of `index` sits at the truncation edge d-1.
    pub fn in_lower_block(&self, index: usize) -> bool {
        self.digits(index)
            .iter()
            .zip(&self.factors)
            .all(|(&digit, &d)| digit < d - 1)
    }
}

impl From<FockSpace> for HilbertSpace {
    fn from(space: FockSpace) -> Self {
        HilbertSpace {
            factors: vec![space.dim],
        }
    }
}

/// Dense complex matrix over a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub space: HilbertSpace,
    pub entries: Array2<Complex64>,
}

fn kron(a: &Array2<Complex64>, b: &Array2<Complex64>) -> Array2<Complex64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for ia in 0..ra {
        for ja in 0..ca {
            let va = a[(ia, ja)];
            if va == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..rb {
                for jb in 0..cb {
                    out[(ia * rb + ib, ja * cb + jb)] = va * b[(ib, jb)];
                }
            }
        }
    }
    out
}

impl OperatorMatrix {
    pub fn from_entries(space: HilbertSpace, entries: Array2<Complex64>) -> Result<Self> {
        let d = space.total_dim();
        if entries.dim() != (d, d) {
            return Err(CoreError::DimensionMismatch(format!(
                "matrix shape {:?} does not match space dimension {d}",
                entries.dim()
            )));
        }
        Ok(Self { space, entries })
    }

    /// a|n> = sqrt(n)|n-1>: entries a[n-1, n] = sqrt(n).
    pub fn annihilation(space: &FockSpace) -> Self {
        let d = space.dim();
        let mut entries = Array2::zeros((d, d));
        for n in 1..d {
            entries[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Self {
            space: (*space).into(),
            entries,
        }
    }

    /// Conjugate transpose of the annihilation operator.
    pub fn creation(space: &FockSpace) -> Self {
        Self::annihilation(space).dagger()
    }

    /// Diagonal number operator with spectrum {0 .. d-1}.
    pub fn number(space: &FockSpace) -> Self {
        let d = space.dim();
        let mut entries = Array2::zeros((d, d));
        for n in 0..d {
            entries[(n, n)] = Complex64::new(n as f64, 0.0);
        }
        Self {
            space: (*space).into(),
            entries,
        }
    }

    pub fn identity(space: &HilbertSpace) -> Self {
        let d = space.total_dim();
        Self {
            space: space.clone(),
            entries: Array2::eye(d),
        }
    }

    pub fn dim(&self) -> usize {
        self.space.total_dim()
    }

    pub fn dagger(&self) -> Self {
        Self {
            space: self.space.clone(),
            entries: self.entries.t().mapv(|v| v.conj()),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            space: self.space.clone(),
            entries: self.entries.mapv(|v| v * factor),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: self.entries.dot(&other.entries),
        })
    }

    /// AB - BA.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.sub(&ba)
    }

    /// Kronecker product, guarded by [`DEFAULT_DIM_LIMIT`].
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_limit(other, DEFAULT_DIM_LIMIT)
    }

    pub fn tensor_with_limit(&self, other: &Self, limit: usize) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > limit {
            return Err(CoreError::DimensionLimit { dim, limit });
        }
        Ok(Self {
            space: self.space.join(&other.space),
            entries: kron(&self.entries, &other.entries),
        })
    }

    /// Lift a single-factor operator onto factor `slot` of `space`,
    /// tensoring identities everywhere else.
    pub fn embed(op: &OperatorMatrix, space: &HilbertSpace, slot: usize) -> Result<Self> {
        if op.space.factors().len() != 1 {
            return Err(CoreError::DimensionMismatch(
                "embed expects a single-factor operator".into(),
            ));
        }
        let factors = space.factors();
        if slot >= factors.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "factor slot {slot} out of range for {} factors",
                factors.len()
            )));
        }
        if factors[slot] != op.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "operator dimension {} does not match factor {} of size {}",
                op.dim(),
                slot,
                factors[slot]
            )));
        }
        let mut entries = Array2::eye(1);
        for (i, &d) in factors.iter().enumerate() {
            if i == slot {
                entries = kron(&entries, &op.entries);
            } else {
                entries = kron(&entries, &Array2::eye(d));
            }
        }
        Ok(Self {
            space: space.clone(),
            entries,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry deviation from Hermitian symmetry.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.dim();
        let mut max = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                max = max.max((self.entries[(i, j)] - self.entries[(j, i)].conj()).norm());
            }
        }
        max
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    /// (M + M^+)/2.
    pub fn hermitian_part(&self) -> Self {
        let dag = self.dagger();
        Self {
            space: self.space.clone(),
            entries: (&self.entries + &dag.entries) * Complex64::new(0.5, 0.0),
        }
    }

    /// (M - M^+)/(2i); Hermitian for any M.
    pub fn anti_hermitian_part(&self) -> Self {
        let dag = self.dagger();
        Self {
            space: self.space.clone(),
            entries: (&self.entries - &dag.entries) * Complex64::new(0.0, -0.5),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.diag().sum()
    }

    /// Max entry difference on the lower block (all factor digits < d-1).
    pub fn lower_block_max_deviation(&self, target: &Self) -> Result<f64> {
        self.check_space(target)?;
        let d = self.dim();
        let lower: Vec<usize> = (0..d).filter(|&i| self.space.in_lower_block(i)).collect();
        let mut max = 0.0_f64;
        for &i in &lower {
            for &j in &lower {
                max = max.max((self.entries[(i, j)] - target.entries[(i, j)]).norm());
            }
        }
        Ok(max)
    }

    pub fn apply(&self, state: &StateVector) -> Result<Array1<Complex64>> {
        if state.space != self.space {
            return Err(CoreError::DimensionMismatch(
                "operator and state live on different spaces".into(),
            ));
        }
        Ok(self.entries.dot(&state.amplitudes))
    }

    /// Matrix-market style text: coordinate list of the nonzero entries.
    pub fn to_matrix_market(&self) -> String {
        let d = self.dim();
        let nonzeros: Vec<(usize, usize, Complex64)> = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let v = self.entries[(i, j)];
                (v != Complex64::new(0.0, 0.0)).then_some((i, j, v))
            })
            .collect();
        let mut out = String::from("%%MatrixMarket matrix coordinate complex general\n");
        out.push_str(&format!(
            "% factors: {}\n",
            self.space
                .factors()
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
        out.push_str(&format!("{d} {d} {}\n", nonzeros.len()));
        for (i, j, v) in nonzeros {
            out.push_str(&format!(
                "{} {} {:.15e} {:.15e}\n",
                i + 1,
                j + 1,
                v.re,
                v.im
            ));
        }
        out
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(CoreError::DimensionMismatch(format!(
                "operand spaces differ: {:?} vs {:?}",
                self.space.factors(),
                other.space.factors()
            )));
        }
        Ok(())
    }
}

/// Normalized state on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub space: HilbertSpace,
    pub amplitudes: Array1<Complex64>,
}

impl StateVector {
    /// Build and normalize; rejects (near-)zero vectors.
    pub fn new(space: HilbertSpace, amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "{} amplitudes for dimension {}",
                amplitudes.len(),
                space.total_dim()
            )));
        }
        let norm = amplitudes.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() || norm < 1e-150 {
            return Err(CoreError::InvalidState(format!(
                "cannot normalize vector with norm {norm}"
            )));
        }
        Ok(Self {
            space,
            amplitudes: amplitudes.mapv(|v| v / norm),
        })
    }

    pub fn basis_state(space: &HilbertSpace, index: usize) -> Result<Self> {
        let d = space.total_dim();
        if index >= d {
            return Err(CoreError::DimensionMismatch(format!(
                "basis index {index} out of range for dimension {d}"
            )));
        }
        let mut amplitudes = Array1::zeros(d);
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            space: space.clone(),
            amplitudes,
        })
    }

    pub fn vacuum(space: &HilbertSpace) -> Self {
        Self::basis_state(space, 0).expect("dimension >= 2 by construction")
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Matrix-market style text: dense column vector in array format.
    pub fn to_matrix_market(&self) -> String {
        let mut out = String::from("%%MatrixMarket matrix array complex general\n");
        out.push_str(&format!(
            "% factors: {}\n",
            self.space
                .factors()
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
        out.push_str(&format!("{} 1\n", self.amplitudes.len()));
        for v in self.amplitudes.iter() {
            out.push_str(&format!("{:.15e} {:.15e}\n", v.re, v.im));
        }
        out
    }
}

/// Kronecker product of states (left factor slowest).
pub fn tensor_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let dim = a.amplitudes.len() * b.amplitudes.len();
    if dim > DEFAULT_DIM_LIMIT {
        return Err(CoreError::DimensionLimit {
            dim,
            limit: DEFAULT_DIM_LIMIT,
        });
    }
    let mut amplitudes = Array1::zeros(dim);
    let db = b.amplitudes.len();
    for (i, &va) in a.amplitudes.iter().enumerate() {
        for (j, &vb) in b.amplitudes.iter().enumerate() {
            amplitudes[i * db + j] = va * vb;
        }
    }
    StateVector::new(a.space.join(&b.space), amplitudes)
}

/// Truncated coherent state, renormalized after the cutoff.
pub fn coherent_state(alpha: Complex64, space: &FockSpace) -> StateVector {
    let d = space.dim();
    let mut amplitudes = Array1::zeros(d);
    let mut coeff = Complex64::new(1.0, 0.0);
    amplitudes[0] = coeff;
    for n in 1..d {
        coeff *= alpha / (n as f64).sqrt();
        amplitudes[n] = coeff;
    }
    StateVector::new((*space).into(), amplitudes).expect("coherent amplitudes are finite")
}

/// Whether the cutoff comfortably contains the coherent state's photon
/// distribution (d >= |alpha|^2 + 10|alpha| + 10).
pub fn coherent_truncation_adequate(alpha: Complex64, dim: usize) -> bool {
    let a = alpha.norm();
    (dim as f64) >= a * a + 10.0 * a + 10.0
}

/// <psi| A |psi>.
pub fn expectation(op: &OperatorMatrix, state: &StateVector) -> Result<Complex64> {
    let applied = op.apply(state)?;
    Ok(state
        .amplitudes
        .iter()
        .zip(applied.iter())
        .map(|(c, v)| c.conj() * v)
        .sum())
}

/// Contract one tensor factor with a single-factor state on both sides,
/// leaving an operator on the remaining factors.
pub fn partial_expectation(
    op: &OperatorMatrix,
    slot: usize,
    state: &StateVector,
) -> Result<OperatorMatrix> {
    let factors = op.space.factors();
    if factors.len() < 2 {
        return Err(CoreError::DimensionMismatch(
            "partial expectation needs at least two factors".into(),
        ));
    }
    if slot >= factors.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "factor slot {slot} out of range"
        )));
    }
    if state.space.factors().len() != 1 || state.space.factors()[0] != factors[slot] {
        return Err(CoreError::DimensionMismatch(
            "state does not match the contracted factor".into(),
        ));
    }
    let remaining: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter_map(|(i, &d)| (i != slot).then_some(d))
        .collect();
    let out_space = HilbertSpace::product(&remaining)?;
    let d_out = out_space.total_dim();
    let d_slot = factors[slot];
    let mut entries = Array2::zeros((d_out, d_out));

    // Strides for recomposing the full index from (remaining digits, slot digit).
    let compose = |rest: usize, digit: usize| -> usize {
        let rest_digits = out_space.digits(rest);
        let mut full = 0usize;
        let mut rest_iter = rest_digits.iter();
        for (i, &d) in factors.iter().enumerate() {
            let dig = if i == slot {
                digit
            } else {
                *rest_iter.next().expect("digit count matches")
            };
            full = full * d + dig;
        }
        full
    };

    for r in 0..d_out {
        for c in 0..d_out {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..d_slot {
                for j in 0..d_slot {
                    let weight = state.amplitudes[i].conj() * state.amplitudes[j];
                    if weight == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    acc += weight * op.entries[(compose(r, i), compose(c, j))];
                }
            }
            entries[(r, c)] = acc;
        }
    }
    OperatorMatrix::from_entries(out_space, entries)
}
