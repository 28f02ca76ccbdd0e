//! Exact coefficient arithmetic: rationals, truncated power series
//! `Q[s]/(s^{n+1})` and univariate rational functions `Q(t)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

/// Dense univariate polynomial over Q with no trailing zero coefficient.
/// The zero polynomial is the empty coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct UniPoly(pub Vec<Rat>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            UniPoly(vec![c])
        }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn var() -> Self {
        UniPoly(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_coeffs(mut c: Vec<Rat>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        UniPoly(c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.0.len().max(o.0.len());
        let mut c = vec![Rat::zero(); n];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.0.iter().enumerate() {
            c[i] += x;
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, c: &Rat) -> UniPoly {
        if c.is_zero() {
            return Self::zero();
        }
        UniPoly(self.0.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "univariate division by zero");
        let dd = d.degree().unwrap();
        let lead = d.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quo = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd || (rem.len() == dd + 1 && dd == 0) {
            while rem.last().map_or(false, |x| x.is_zero()) {
                rem.pop();
            }
            if rem.len() < dd + 1 {
                break;
            }
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] / &lead;
            for (j, b) in d.0.iter().enumerate() {
                let t = &c * b;
                let idx = k + j;
                rem[idx] -= t;
            }
            quo[k] = c;
            while rem.last().map_or(false, |x| x.is_zero()) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        (Self::from_coeffs(quo), Self::from_coeffs(rem))
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> UniPoly {
        match self.degree() {
            None => Self::zero(),
            Some(d) => {
                let lead = self.0[d].clone();
                self.scale(&(Rat::one() / lead))
            }
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn fmt_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = match i {
                0 => fmt_rat(c),
                1 if c.is_one() => var.to_string(),
                1 if (-c).is_one() => format!("-{var}"),
                1 => format!("{}*{var}", fmt_rat(c)),
                _ if c.is_one() => format!("{var}^{i}"),
                _ if (-c).is_one() => format!("-{var}^{i}"),
                _ => format!("{}*{var}^{i}", fmt_rat(c)),
            };
            parts.push(body);
        }
        join_signed(parts)
    }
}

pub fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn join_signed(parts: Vec<String>) -> String {
    let mut s = String::new();
    for (i, p) in parts.iter().enumerate() {
        if i == 0 {
            s.push_str(p);
        } else if let Some(stripped) = p.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(stripped);
        } else {
            s.push_str(" + ");
            s.push_str(p);
        }
    }
    s
}

/// Element of the truncated ring `Q[s]/(s^{n+1})`, stored as the
/// coefficient vector `(c_0, ..., c_n)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TruncSeries {
    pub c: Vec<Rat>,
}

impl TruncSeries {
    pub fn zero(order: usize) -> Self {
        TruncSeries {
            c: vec![Rat::zero(); order + 1],
        }
    }

    pub fn constant(order: usize, v: Rat) -> Self {
        let mut t = Self::zero(order);
        t.c[0] = v;
        t
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// A truncated series is a unit exactly when its constant term is nonzero.
    pub fn is_unit(&self) -> bool {
        !self.c[0].is_zero()
    }

    pub fn add(&self, o: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), o.order(), "mixed truncation orders");
        TruncSeries {
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, o: &TruncSeries) -> TruncSeries {
        assert_eq!(self.order(), o.order(), "mixed truncation orders");
        let n = self.order();
        let mut c = vec![Rat::zero(); n + 1];
        for i in 0..=n {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                c[i + j] += &self.c[i] * &o.c[j];
            }
        }
        TruncSeries { c }
    }

    /// Multiplicative inverse, defined exactly for units.
    pub fn inv(&self) -> Option<TruncSeries> {
        if !self.is_unit() {
            return None;
        }
        let n = self.order();
        let mut r = vec![Rat::zero(); n + 1];
        r[0] = Rat::one() / &self.c[0];
        for k in 1..=n {
            let mut acc = Rat::zero();
            for j in 0..k {
                acc += &self.c[k - j] * &r[j];
            }
            r[k] = -acc / &self.c[0];
        }
        Some(TruncSeries { c: r })
    }
}

/// Element of Q(t): a reduced fraction of univariate polynomials with a
/// monic denominator.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RatFun {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl RatFun {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun {
                num: UniPoly::zero(),
                den: UniPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.0[den.degree().unwrap()].clone();
        RatFun {
            num: num.scale(&(Rat::one() / &lead)),
            den: den.scale(&(Rat::one() / &lead)),
        }
    }

    pub fn zero() -> Self {
        RatFun {
            num: UniPoly::zero(),
            den: UniPoly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        RatFun {
            num: UniPoly::constant(c),
            den: UniPoly::one(),
        }
    }

    pub fn var() -> Self {
        RatFun {
            num: UniPoly::var(),
            den: UniPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        RatFun::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            None
        } else {
            Some(RatFun::new(self.den.clone(), self.num.clone()))
        }
    }
}

/// The kind of coefficient ring a polynomial lives over.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum CoeffKind {
    /// The rational numbers.
    Rational,
    /// `Q[s]/(s^{n+1})` with the given truncation order `n`.
    Truncated(usize),
    /// The rational function field `Q(t)`; the string is the display name
    /// of the transcendental parameter.
    RationalFunction(String),
}

impl CoeffKind {
    pub fn is_field(&self) -> bool {
        !matches!(self, CoeffKind::Truncated(_))
    }
}

/// A coefficient, tagged by ring kind. Arithmetic between mismatched kinds
/// (or mismatched truncation orders) is a programming error and panics.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Scalar {
    Rational(Rat),
    Truncated(TruncSeries),
    RationalFunction(RatFun),
}

impl Scalar {
    pub fn zero(kind: &CoeffKind) -> Scalar {
        match kind {
            CoeffKind::Rational => Scalar::Rational(Rat::zero()),
            CoeffKind::Truncated(n) => Scalar::Truncated(TruncSeries::zero(*n)),
            CoeffKind::RationalFunction(_) => Scalar::RationalFunction(RatFun::zero()),
        }
    }

    pub fn one(kind: &CoeffKind) -> Scalar {
        Scalar::from_rat(kind, Rat::one())
    }

    pub fn from_rat(kind: &CoeffKind, v: Rat) -> Scalar {
        match kind {
            CoeffKind::Rational => Scalar::Rational(v),
            CoeffKind::Truncated(n) => Scalar::Truncated(TruncSeries::constant(*n, v)),
            CoeffKind::RationalFunction(_) => Scalar::RationalFunction(RatFun::constant(v)),
        }
    }

    pub fn kind(&self) -> CoeffKind {
        match self {
            Scalar::Rational(_) => CoeffKind::Rational,
            Scalar::Truncated(t) => CoeffKind::Truncated(t.order()),
            Scalar::RationalFunction(_) => CoeffKind::RationalFunction(String::new()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Truncated(t) => t.is_zero(),
            Scalar::RationalFunction(f) => f.is_zero(),
        }
    }

    /// Units: every nonzero element of a field; truncated series with a
    /// nonzero constant term.
    pub fn is_unit(&self) -> bool {
        match self {
            Scalar::Rational(r) => !r.is_zero(),
            Scalar::Truncated(t) => t.is_unit(),
            Scalar::RationalFunction(f) => !f.is_zero(),
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Truncated(a), Scalar::Truncated(b)) => Scalar::Truncated(a.add(b)),
            (Scalar::RationalFunction(a), Scalar::RationalFunction(b)) => {
                Scalar::RationalFunction(a.add(b))
            }
            _ => panic!("scalar kind mismatch in addition"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Truncated(a) => Scalar::Truncated(a.neg()),
            Scalar::RationalFunction(a) => Scalar::RationalFunction(a.neg()),
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Truncated(a), Scalar::Truncated(b)) => Scalar::Truncated(a.mul(b)),
            (Scalar::RationalFunction(a), Scalar::RationalFunction(b)) => {
                Scalar::RationalFunction(a.mul(b))
            }
            _ => panic!("scalar kind mismatch in multiplication"),
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(a) => {
                if a.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(Rat::one() / a))
                }
            }
            Scalar::Truncated(a) => a.inv().map(Scalar::Truncated),
            Scalar::RationalFunction(a) => a.inv().map(Scalar::RationalFunction),
        }
    }

    pub fn mul_rat(&self, c: &Rat) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(a * c),
            Scalar::Truncated(a) => Scalar::Truncated(TruncSeries {
                c: a.c.iter().map(|x| x * c).collect(),
            }),
            Scalar::RationalFunction(a) => {
                Scalar::RationalFunction(RatFun::new(a.num.scale(c), a.den.clone()))
            }
        }
    }

    /// Constant term of a truncated series (reduction modulo the nilpotent);
    /// the identity on field scalars.
    pub fn residue(&self) -> Rat {
        match self {
            Scalar::Rational(a) => a.clone(),
            Scalar::Truncated(a) => a.c[0].clone(),
            Scalar::RationalFunction(_) => {
                panic!("no canonical residue for a rational function")
            }
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            Scalar::Rational(a) => Some(a),
            _ => None,
        }
    }

    pub fn fmt_with(&self, param: &str) -> String {
        match self {
            Scalar::Rational(a) => fmt_rat(a),
            Scalar::Truncated(a) => {
                let u = UniPoly::from_coeffs(a.c.clone());
                u.fmt_with(param)
            }
            Scalar::RationalFunction(f) => {
                if f.den.degree() == Some(0) || f.den == UniPoly::one() {
                    f.num.fmt_with(param)
                } else {
                    format!("({})/({})", f.num.fmt_with(param), f.den.fmt_with(param))
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let param = match self {
            Scalar::Truncated(_) => "s",
            _ => "t",
        };
        write!(f, "{}", self.fmt_with(param))
    }
}
