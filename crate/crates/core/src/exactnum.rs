//! Exact arithmetic in the ring of dyadic cyclotomics, Z[1/2, w] with w = e^{i pi/4}.
//!
//! Elements are stored over the basis {1, w, w^2, w^3} with w^4 = -1, each
//! coefficient a dyadic rational n / 2^k kept in lowest terms.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

/// A dyadic rational `num / 2^k`. Normalized: `k == 0` or `num` odd; zero is `0 / 2^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyadic {
    num: BigInt,
    k: u32,
}

impl Dyadic {
    pub fn new(num: impl Into<BigInt>, k: u32) -> Dyadic {
        let mut d = Dyadic { num: num.into(), k };
        d.normalize();
        d
    }

    pub fn zero() -> Dyadic {
        Dyadic { num: BigInt::zero(), k: 0 }
    }

    pub fn one() -> Dyadic {
        Dyadic { num: BigInt::one(), k: 0 }
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic { num: BigInt::from(n), k: 0 }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.num
    }

    pub fn log_den(&self) -> u32 {
        self.k
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.k = 0;
            return;
        }
        if self.k == 0 {
            return;
        }
        let tz = self.num.trailing_zeros().unwrap_or(0);
        let s = tz.min(self.k as u64) as u32;
        if s > 0 {
            self.num >>= s;
            self.k -= s;
        }
    }

    /// Numerator rescaled to denominator `2^k`; requires `k >= self.k`.
    fn scaled_to(&self, k: u32) -> BigInt {
        &self.num << (k - self.k)
    }

    pub fn half(&self) -> Dyadic {
        Dyadic::new(self.num.clone(), self.k + 1)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.num.to_f64().unwrap_or(f64::NAN);
        n / 2f64.powi(self.k as i32)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let k = self.k.max(o.k);
        Dyadic::new(self.scaled_to(k) + o.scaled_to(k), k)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { num: -&self.num, k: self.k }
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() || o.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.num * &o.num, self.k + o.k)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, BigInt::one() << self.k)
        }
    }
}

/// An element `c0 + c1 w + c2 w^2 + c3 w^3` of Z[1/2, w].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicCyclotomic {
    c: [Dyadic; 4],
}

/// Short alias used throughout the crate.
pub type Cyclo = DyadicCyclotomic;

impl DyadicCyclotomic {
    pub fn new(c0: Dyadic, c1: Dyadic, c2: Dyadic, c3: Dyadic) -> Cyclo {
        Cyclo { c: [c0, c1, c2, c3] }
    }

    /// Integer coefficients over a common denominator `2^k`.
    pub fn from_ints(c: [i64; 4], k: u32) -> Cyclo {
        Cyclo { c: c.map(|n| Dyadic::new(n, k)) }
    }

    pub fn zero() -> Cyclo {
        Cyclo { c: [Dyadic::zero(), Dyadic::zero(), Dyadic::zero(), Dyadic::zero()] }
    }

    pub fn one() -> Cyclo {
        Cyclo::from_dyadic(Dyadic::one())
    }

    pub fn from_dyadic(d: Dyadic) -> Cyclo {
        Cyclo { c: [d, Dyadic::zero(), Dyadic::zero(), Dyadic::zero()] }
    }

    pub fn from_int(n: i64) -> Cyclo {
        Cyclo::from_dyadic(Dyadic::from_int(n))
    }

    /// `w^n` for any integer `n`.
    pub fn omega_pow(n: i64) -> Cyclo {
        let m = n.rem_euclid(8) as usize;
        let mut z = Cyclo::zero();
        z.c[m % 4] = if m < 4 { Dyadic::one() } else { Dyadic::from_int(-1) };
        z
    }

    /// The imaginary unit, `w^2`.
    pub fn i() -> Cyclo {
        Cyclo::omega_pow(2)
    }

    /// `sqrt 2 = w - w^3`.
    pub fn sqrt2() -> Cyclo {
        Cyclo::from_ints([0, 1, 0, -1], 0)
    }

    pub fn coeffs(&self) -> &[Dyadic; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Dyadic::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Cyclo::one()
    }

    pub fn conjugate(&self) -> Cyclo {
        let [c0, c1, c2, c3] = &self.c;
        Cyclo { c: [c0.clone(), -c3, -c2, -c1] }
    }

    pub fn equals(&self, other: &Cyclo) -> bool {
        self == other
    }

    /// Multiply by `w^n` (a rotation of the coefficient vector with sign flips).
    pub fn mul_omega_pow(&self, n: i64) -> Cyclo {
        let m = n.rem_euclid(8) as usize;
        let mut out = Cyclo::zero();
        for (i, ci) in self.c.iter().enumerate() {
            let j = i + m;
            let neg = (j / 4) % 2 == 1;
            out.c[j % 4] = if neg { -ci } else { ci.clone() };
        }
        out
    }

    /// The largest denominator exponent among the coefficients.
    pub fn max_log_den(&self) -> u32 {
        self.c.iter().map(Dyadic::log_den).max().unwrap_or(0)
    }

    /// Integer numerators over the common denominator `2^max_log_den`.
    pub fn common_numerators(&self) -> ([BigInt; 4], u32) {
        let k = self.max_log_den();
        (self.c.clone().map(|d| d.scaled_to(k)), k)
    }

    /// Approximate complex value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v: Vec<f64> = self.c.iter().map(Dyadic::to_f64).collect();
        (v[0] + h * v[1] - h * v[3], h * v[1] + v[2] + h * v[3])
    }

    pub fn to_json(&self) -> Value {
        let mut out = Vec::with_capacity(8);
        for d in &self.c {
            out.push(bigint_to_json(&d.num));
            out.push(Value::from(d.k));
        }
        serde_json::json!({ "c": out })
    }

    pub fn from_json(v: &Value) -> Result<Cyclo, String> {
        let arr = v
            .get("c")
            .and_then(Value::as_array)
            .ok_or_else(|| "expected an object with array field \"c\"".to_string())?;
        if arr.len() != 8 {
            return Err(format!("expected 8 entries in \"c\", found {}", arr.len()));
        }
        let mut c = Cyclo::zero();
        for i in 0..4 {
            let n = bigint_from_json(&arr[2 * i])?;
            let k = arr[2 * i + 1]
                .as_u64()
                .and_then(|k| u32::try_from(k).ok())
                .ok_or_else(|| "denominator exponent must be a small non-negative integer".to_string())?;
            c.c[i] = Dyadic::new(n, k);
        }
        Ok(c)
    }

    /// Text form over integer numerators, e.g. `w`, `-1`, `(1 - w^2)/2`.
    fn render_poly(nums: &[BigInt; 4]) -> (String, usize) {
        let mut s = String::new();
        let mut terms = 0;
        for (i, n) in nums.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let mag = n.abs();
            if terms == 0 {
                if n.is_negative() {
                    s.push('-');
                }
            } else {
                s.push_str(if n.is_negative() { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => "w".to_string(),
                _ => format!("w^{i}"),
            };
            if mono.is_empty() {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&mono);
            } else {
                s.push_str(&format!("{mag}{mono}"));
            }
            terms += 1;
        }
        if terms == 0 {
            s.push('0');
        }
        (s, terms)
    }
}

fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

fn bigint_from_json(v: &Value) -> Result<BigInt, String> {
    if let Some(i) = v.as_i64() {
        return Ok(BigInt::from(i));
    }
    if let Some(s) = v.as_str() {
        return s.parse::<BigInt>().map_err(|e| format!("bad integer {s:?}: {e}"));
    }
    Err(format!("expected an integer, found {v}"))
}

impl fmt::Display for DyadicCyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (nums, k) = self.common_numerators();
        let (body, terms) = Cyclo::render_poly(&nums);
        if k == 0 {
            return f.write_str(&body);
        }
        let den = BigInt::one() << k;
        if terms == 1 {
            write!(f, "{body}/{den}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

/// Render an element known to have integer coefficients (or fall back to the general form).
pub(crate) fn render_integral(x: &Cyclo) -> String {
    let (nums, k) = x.common_numerators();
    if k == 0 {
        Cyclo::render_poly(&nums).0
    } else {
        x.to_string()
    }
}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, o: &Cyclo) -> Cyclo {
        Cyclo {
            c: [&self.c[0] + &o.c[0], &self.c[1] + &o.c[1], &self.c[2] + &o.c[2], &self.c[3] + &o.c[3]],
        }
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, o: &Cyclo) -> Cyclo {
        self + &(-o)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, o: &Cyclo) -> Cyclo {
        let mut acc = Cyclo::zero();
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let idx = i + j;
                if idx < 4 {
                    acc.c[idx] = &acc.c[idx] + &p;
                } else {
                    acc.c[idx - 4] = &acc.c[idx - 4] - &p;
                }
            }
        }
        acc
    }
}

macro_rules! forward_owned {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Cyclo, Add, add);
forward_owned!(Cyclo, Sub, sub);
forward_owned!(Cyclo, Mul, mul);
forward_owned!(Dyadic, Add, add);
forward_owned!(Dyadic, Sub, sub);
forward_owned!(Dyadic, Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

/// Free-function forms of the ring operations.
pub fn add(a: &Cyclo, b: &Cyclo) -> Cyclo {
    a + b
}

pub fn mul(a: &Cyclo, b: &Cyclo) -> Cyclo {
    a * b
}

pub fn conjugate(a: &Cyclo) -> Cyclo {
    a.conjugate()
}

pub fn omega_pow(n: i64) -> Cyclo {
    Cyclo::omega_pow(n)
}

pub fn equals(a: &Cyclo, b: &Cyclo) -> bool {
    a == b
}
