use std::fmt;

use serde_json::Value;

use crate::exactnum::{render_integral, Cyclo};

/// Dense matrix over Z[1/2, w], row-major. Zero-sized dimensions are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Cyclo>,
}

/// Outcome of [`equal_matrices`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixEq {
    Equal,
    /// `a = w^k b` with `k` in 1..8.
    EqualWithPhase(u8),
    NotEqual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    Strict,
    UpToOmegaPower,
}

impl ExactMatrix {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Cyclo>) -> ExactMatrix {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows * cols");
        ExactMatrix { rows, cols, entries }
    }

    /// Build from integer coefficient tuples over a common denominator `2^k`.
    pub fn from_int_rows(rows: &[&[[i64; 4]]], k: u32) -> ExactMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let entries = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged rows");
                row.iter().map(|e| Cyclo::from_ints(*e, k))
            })
            .collect();
        ExactMatrix::from_entries(r, c, entries)
    }

    pub fn zeros(rows: usize, cols: usize) -> ExactMatrix {
        ExactMatrix { rows, cols, entries: vec![Cyclo::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> ExactMatrix {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Cyclo::one();
        }
        m
    }

    /// Permutation matrix sending basis vector `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> ExactMatrix {
        let n = perm.len();
        let mut m = ExactMatrix::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.entries[i * n + j] = Cyclo::one();
        }
        m
    }

    pub fn scalar(x: Cyclo) -> ExactMatrix {
        ExactMatrix { rows: 1, cols: 1, entries: vec![x] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Cyclo] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Cyclo {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Cyclo) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn map(&self, f: impl Fn(&Cyclo) -> Cyclo) -> ExactMatrix {
        ExactMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(f).collect() }
    }

    pub fn scale_omega(&self, k: i64) -> ExactMatrix {
        self.map(|x| x.mul_omega_pow(k))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == ExactMatrix::identity(self.rows)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && compose(self, &adjoint(self)).is_identity()
    }

    /// `self^n` for square matrices.
    pub fn pow(&self, n: u32) -> ExactMatrix {
        let mut acc = ExactMatrix::identity(self.rows);
        for _ in 0..n {
            acc = compose(&acc, self);
        }
        acc
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "rows": self.rows,
            "cols": self.cols,
            "entries": self.entries.iter().map(Cyclo::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<ExactMatrix, String> {
        let dim = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|n| n as usize)
                .ok_or_else(|| format!("missing or invalid \"{k}\""))
        };
        let (rows, cols) = (dim("rows")?, dim("cols")?);
        let entries = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| "missing \"entries\" array".to_string())?
            .iter()
            .map(Cyclo::from_json)
            .collect::<Result<Vec<_>, _>>()?;
        if entries.len() != rows * cols {
            return Err(format!("expected {} entries, found {}", rows * cols, entries.len()));
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    /// Smallest `e` such that every entry times `sqrt2^e` has integer coefficients.
    fn sqrt2_exponent(&self) -> (u32, ExactMatrix) {
        let kmax = self.entries.iter().map(Cyclo::max_log_den).max().unwrap_or(0);
        let mut cur = self.clone();
        let s = Cyclo::sqrt2();
        for e in 0..=(2 * kmax + 1) {
            if cur.entries.iter().all(|x| x.max_log_den() == 0) {
                return (e, cur);
            }
            cur = cur.map(|x| x * &s);
        }
        unreachable!("multiplying by 2^k always clears denominators 2^k")
    }

    /// Approximate decimal rendering; for eyeballing only.
    pub fn display_float(&self) -> String {
        let mut out = String::from("[");
        for r in 0..self.rows {
            if r > 0 {
                out.push_str(", ");
            }
            out.push('[');
            for c in 0..self.cols {
                if c > 0 {
                    out.push_str(", ");
                }
                let (re, im) = self.get(r, c).to_complex();
                let clean = |x: f64| if x.abs() < 5e-13 { 0.0 } else { x };
                let (re, im) = (clean(re), clean(im));
                if im >= 0.0 {
                    out.push_str(&format!("{re:.6}+{im:.6}i"));
                } else {
                    out.push_str(&format!("{re:.6}-{:.6}i", -im));
                }
            }
            out.push(']');
        }
        out.push(']');
        out
    }
}

impl fmt::Display for ExactMatrix {
    /// Entries over a common `2^j sqrt2^m` denominator, e.g. `(1/√2)[[1, 1], [1, -1]]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (e, scaled) = self.sqrt2_exponent();
        let pow2 = 1u128 << (e / 2);
        match (e / 2, e % 2) {
            (0, 0) => {}
            (_, 0) => write!(f, "(1/{pow2})")?,
            (0, _) => f.write_str("(1/√2)")?,
            (_, _) => write!(f, "(1/({pow2}√2))")?,
        }
        f.write_str("[")?;
        for r in 0..self.rows {
            if r > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for c in 0..self.cols {
                if c > 0 {
                    f.write_str(", ")?;
                }
                f.write_str(&render_integral(scaled.get(r, c)))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// Matrix product `a * b`.
pub fn compose(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    assert_eq!(a.cols, b.rows, "compose: inner dimensions differ");
    let mut out = ExactMatrix::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(i, k);
            if x.is_zero() {
                continue;
            }
            for j in 0..b.cols {
                let y = b.get(k, j);
                if y.is_zero() {
                    continue;
                }
                let idx = i * b.cols + j;
                out.entries[idx] = &out.entries[idx] + &(x * y);
            }
        }
    }
    out
}

/// Block diagonal with `a` top-left.
pub fn direct_sum(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
    for r in 0..a.rows {
        for c in 0..a.cols {
            out.set(r, c, a.get(r, c).clone());
        }
    }
    for r in 0..b.rows {
        for c in 0..b.cols {
            out.set(a.rows + r, a.cols + c, b.get(r, c).clone());
        }
    }
    out
}

/// Kronecker product, left factor most significant.
pub fn kronecker(a: &ExactMatrix, b: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for r1 in 0..a.rows {
        for c1 in 0..a.cols {
            let x = a.get(r1, c1);
            if x.is_zero() {
                continue;
            }
            for r2 in 0..b.rows {
                for c2 in 0..b.cols {
                    let y = b.get(r2, c2);
                    if !y.is_zero() {
                        out.set(r1 * b.rows + r2, c1 * b.cols + c2, x * y);
                    }
                }
            }
        }
    }
    out
}

/// Conjugate transpose.
pub fn adjoint(a: &ExactMatrix) -> ExactMatrix {
    let mut out = ExactMatrix::zeros(a.cols, a.rows);
    for r in 0..a.rows {
        for c in 0..a.cols {
            out.set(c, r, a.get(r, c).conjugate());
        }
    }
    out
}

/// Compare exactly, or up to a global power of w.
pub fn equal_matrices(a: &ExactMatrix, b: &ExactMatrix, mode: PhaseMode) -> MatrixEq {
    if a.rows != b.rows || a.cols != b.cols {
        return MatrixEq::NotEqual;
    }
    if a == b {
        return MatrixEq::Equal;
    }
    if mode == PhaseMode::Strict {
        return MatrixEq::NotEqual;
    }
    let Some(pivot) = b.entries.iter().position(|x| !x.is_zero()) else {
        return MatrixEq::NotEqual;
    };
    for k in 1..8 {
        if b.entries[pivot].mul_omega_pow(k) == a.entries[pivot] {
            return if b.scale_omega(k) == *a { MatrixEq::EqualWithPhase(k as u8) } else { MatrixEq::NotEqual };
        }
    }
    MatrixEq::NotEqual
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> ExactMatrix {
        // 1/sqrt2 = (w - w^3)/2
        let h = Cyclo::from_ints([0, 1, 0, -1], 1);
        ExactMatrix::from_entries(2, 2, vec![h.clone(), h.clone(), h.clone(), -&h])
    }

    #[test]
    fn display_uses_common_denominator() {
        assert_eq!(hadamard().to_string(), "(1/√2)[[1, 1], [1, -1]]");
        assert_eq!(ExactMatrix::identity(2).to_string(), "[[1, 0], [0, 1]]");
        let half = ExactMatrix::scalar(Cyclo::from_ints([1, 0, 1, 0], 1));
        assert_eq!(half.to_string(), "(1/√2)[[w]]");
        assert_eq!(ExactMatrix::zeros(0, 0).to_string(), "[]");
    }

    #[test]
    fn kronecker_is_left_major() {
        let x = ExactMatrix::permutation(&[1, 0]);
        let i = ExactMatrix::identity(2);
        let xi = kronecker(&x, &i);
        // X on the most significant index maps |00> to |10>
        assert!(xi.get(2, 0).is_one());
        let ix = kronecker(&i, &x);
        assert!(ix.get(1, 0).is_one());
    }

    #[test]
    fn zero_dimensional_blocks() {
        let e = ExactMatrix::zeros(0, 0);
        let h = hadamard();
        assert_eq!(direct_sum(&e, &h), h);
        assert_eq!(kronecker(&e, &h).rows(), 0);
        assert!(e.is_unitary());
    }

    #[test]
    fn phase_comparison() {
        let h = hadamard();
        let wh = h.scale_omega(3);
        assert_eq!(equal_matrices(&wh, &h, PhaseMode::UpToOmegaPower), MatrixEq::EqualWithPhase(3));
        assert_eq!(equal_matrices(&wh, &h, PhaseMode::Strict), MatrixEq::NotEqual);
        assert_eq!(equal_matrices(&h, &h, PhaseMode::UpToOmegaPower), MatrixEq::Equal);
        let x = ExactMatrix::permutation(&[1, 0]);
        assert_eq!(equal_matrices(&x, &ExactMatrix::identity(2), PhaseMode::UpToOmegaPower), MatrixEq::NotEqual);
    }

    #[test]
    fn json_round_trip() {
        let h = hadamard().scale_omega(1);
        let back = ExactMatrix::from_json(&h.to_json()).unwrap();
        assert_eq!(back, h);
        assert!(h.is_unitary());
    }
}
