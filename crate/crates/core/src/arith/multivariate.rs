use std::collections::BTreeMap;

use super::{ArithError, Field};

/// Sparse polynomial in a fixed number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct MPoly<T> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Field> MPoly<T> {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, T::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn add_term(&mut self, exps: Vec<u32>, c: T) {
        let v = self.terms.remove(&exps).map_or(c.clone(), |old| old + c);
        if !v.is_zero() {
            self.terms.insert(exps, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<T> {
        match self.terms.len() {
            0 => Some(T::zero()),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(e, _)| e.iter().all(|&x| x == 0))
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca.clone() * cb.clone());
            }
        }
        out
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Coefficient of the top power of variable `i`, as a polynomial free of `i`.
    pub fn leading_in(&self, i: usize) -> Option<(u32, Self)> {
        let d = self.degree_in(i)?;
        let mut lc = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == d {
                let mut e = e.clone();
                e[i] = 0;
                lc.add_term(e, c.clone());
            }
        }
        Some((d, lc))
    }

    /// Replaces variable `i` by the value `v`.
    pub fn substitute(&self, i: usize, v: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e = e.clone();
            let k = std::mem::replace(&mut e[i], 0);
            let mut c = c.clone();
            for _ in 0..k {
                c = c * v.clone();
            }
            out.add_term(e, c);
        }
        out
    }
}

/// Quotient of two polynomials. Not reduced; only evaluation and limits
/// are needed.
#[derive(Debug, Clone, PartialEq)]
pub struct RatFn<T> {
    num: MPoly<T>,
    den: MPoly<T>,
}

/// Outcome of sending one variable to `+inf`.
#[derive(Debug, Clone, PartialEq)]
pub enum RatFnLimit<T> {
    Finite(RatFn<T>),
    PlusInfinity,
    MinusInfinity,
}

impl<T: Field> RatFn<T> {
    pub fn new(num: MPoly<T>, den: MPoly<T>) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(RatFn { num, den })
    }

    pub fn from_poly(p: MPoly<T>) -> Self {
        let one = MPoly::constant(p.nvars(), T::one());
        RatFn { num: p, den: one }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::from_poly(MPoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(MPoly::var(nvars, i))
    }

    pub fn numerator(&self) -> &MPoly<T> {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly<T> {
        &self.den
    }

    pub fn add(&self, o: &Self) -> Self {
        RatFn {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        RatFn {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
    }

    pub fn div(&self, o: &Self) -> Result<Self, ArithError> {
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn substitute(&self, i: usize, v: &T) -> Result<Self, ArithError> {
        Self::new(self.num.substitute(i, v), self.den.substitute(i, v))
    }

    /// Value when no variable remains.
    pub fn as_constant(&self) -> Option<T> {
        Some(self.num.as_constant()? / self.den.as_constant()?)
    }

    /// Limit as variable `i -> +inf` with the other variables held symbolic.
    pub fn limit_in(&self, i: usize) -> Result<RatFnLimit<T>, ArithError> {
        let (dd, lc_d) = self.den.leading_in(i).ok_or(ArithError::ZeroDenominatorPolynomial)?;
        let Some((nd, lc_n)) = self.num.leading_in(i) else {
            return Ok(RatFnLimit::Finite(Self::constant(self.num.nvars(), T::zero())));
        };
        Ok(match nd.cmp(&dd) {
            std::cmp::Ordering::Less => RatFnLimit::Finite(Self::constant(self.num.nvars(), T::zero())),
            std::cmp::Ordering::Equal => RatFnLimit::Finite(Self::new(lc_n, lc_d)?),
            std::cmp::Ordering::Greater => {
                let sign = Self::new(lc_n, lc_d)?
                    .as_constant()
                    .ok_or(ArithError::IndeterminateSign)?;
                if sign.is_positive() {
                    RatFnLimit::PlusInfinity
                } else {
                    RatFnLimit::MinusInfinity
                }
            }
        })
    }
}
