use alloc::string::String;
use alloc::vec::Vec;

use super::field::{Fq, ResidueField};
use super::poly::FqPoly;

/// Element of `k(x)` stored in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRationalFunction {
    field: ResidueField,
    num: FqPoly,
    den: FqPoly,
}

impl ResidueRationalFunction {
    /// Builds `num/den` and reduces it. Panics if `den` is zero.
    pub fn new(field: &ResidueField, num: FqPoly, den: FqPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(field);
        }
        let g = num.gcd(field, &den);
        let num = num.div_rem(field, &g).0;
        let den = den.div_rem(field, &g).0;
        let li = field.inv(den.lead()).unwrap();
        ResidueRationalFunction {
            field: field.clone(),
            num: num.scale(field, li),
            den: den.scale(field, li),
        }
    }

    pub fn zero(field: &ResidueField) -> Self {
        ResidueRationalFunction {
            field: field.clone(),
            num: FqPoly::zero(),
            den: FqPoly::one(),
        }
    }

    pub fn from_poly(field: &ResidueField, num: FqPoly) -> Self {
        Self::new(field, num, FqPoly::one())
    }

    pub fn constant(field: &ResidueField, c: Fq) -> Self {
        Self::from_poly(field, FqPoly::constant(c))
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    pub fn num(&self) -> &FqPoly {
        &self.num
    }

    pub fn den(&self) -> &FqPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// True for elements of `k`.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = &self.field;
        let num = self
            .num
            .mul(k, &other.den)
            .add(k, &other.num.mul(k, &self.den));
        Self::new(k, num, self.den.mul(k, &other.den))
    }

    pub fn neg(&self) -> Self {
        ResidueRationalFunction {
            field: self.field.clone(),
            num: self.num.neg(&self.field),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let k = &self.field;
        Self::new(k, self.num.mul(k, &other.num), self.den.mul(k, &other.den))
    }

    /// `None` when dividing by zero.
    pub fn div(&self, other: &Self) -> Option<Self> {
        if other.is_zero() {
            return None;
        }
        let k = &self.field;
        Some(Self::new(
            k,
            self.num.mul(k, &other.den),
            self.den.mul(k, &other.num),
        ))
    }

    pub fn pow(&self, e: u64) -> Self {
        let k = &self.field;
        Self::new(k, self.num.pow(k, e), self.den.pow(k, e))
    }

    /// The Artin–Schreier operator `w ↦ w^p - w`.
    pub fn wp(&self) -> Self {
        self.pow(self.field.p() as u64).sub(self)
    }

    /// Renders as `num` or `(num)/(den)` in the variable `var`.
    pub fn render(&self, var: &str) -> String {
        let k = &self.field;
        if self.den.is_constant() {
            return render_poly(k, &self.num, var);
        }
        let mut s = String::new();
        s.push('(');
        s.push_str(&render_poly(k, &self.num, var));
        s.push_str(")/(");
        s.push_str(&render_poly(k, &self.den, var));
        s.push(')');
        s
    }
}

/// Renders a residue-field element: its integer value in `F_p`, otherwise
/// `g^k` for the field generator `g`.
pub fn render_scalar(k: &ResidueField, c: Fq) -> String {
    match k.as_prime_field(c) {
        Some(v) => alloc::format!("{}", v),
        None => alloc::format!("g^{}", k.log(c).unwrap()),
    }
}

/// Renders a polynomial with descending exponents, e.g. `3*x^2 + x + 4`.
pub fn render_poly(k: &ResidueField, f: &FqPoly, var: &str) -> String {
    if f.is_zero() {
        return String::from("0");
    }
    let mut parts: Vec<String> = Vec::new();
    for (i, &c) in f.coeffs().iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => String::from(var),
            _ => alloc::format!("{}^{}", var, i),
        };
        let part = if i == 0 {
            render_scalar(k, c)
        } else if c == 1 {
            mono
        } else {
            alloc::format!("{}*{}", render_scalar(k, c), mono)
        };
        parts.push(part);
    }
    parts.join(" + ")
}
