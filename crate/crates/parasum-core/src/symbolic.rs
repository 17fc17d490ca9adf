//! Exact arithmetic for parity-diagonal operators on a countable basis.
//!
//! Operators here are diagonal with separate closed-form entry rules on the
//! odd- and even-indexed basis vectors. Entries are finite sums of terms
//! `c * (n + s)^q` with exact rational data (`c` may carry a single square
//! root), evaluated at the index `n` of a basis vector *within its parity
//! class*. Every rule has an exactly computable limit — the constant part —
//! so membership in the compact-plus-scalar algebra is a decidable, exact
//! question, which is precisely what floating point cannot witness.
//!
//! Scalars are numbers of the form `rat * sqrt(root)`; the grammar is closed
//! under the operations actually needed here (sums with matching surd
//! class, products, quotients, square roots of plain rationals). Anything
//! outside the grammar fails loudly with `NonRepresentable` instead of
//! being silently approximated.

use crate::matrix::ComplexMatrix;
use crate::{Complex64, Error};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

// ---------------------------------------------------------------------------
// Exact scalars: rat * sqrt(root)

/// Exact real scalar `rat * sqrt(root)` with `root` a positive integer
/// (`root == 1` for plain rationals). The zero scalar is canonicalized to
/// `0 * sqrt(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactScalar {
    rat: BigRational,
    root: BigInt,
}

fn big(i: i64) -> BigInt {
    BigInt::from(i)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(big(n), big(d))
}

/// Pull the largest easily found square factor out of `root`, returning
/// `(outside, remaining)` with `root = outside^2 * remaining`.
fn extract_square(root: &BigInt) -> (BigInt, BigInt) {
    debug_assert!(root.is_positive());
    let s = root.sqrt();
    if &s * &s == *root {
        return (s, BigInt::one());
    }
    let mut outside = BigInt::one();
    let mut rem = root.clone();
    for p in [2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p2 = big(p * p);
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            outside *= big(p);
        }
    }
    let s = rem.sqrt();
    if &s * &s == rem {
        (outside * s, BigInt::one())
    } else {
        (outside, rem)
    }
}

impl ExactScalar {
    pub fn new(rat: BigRational, root: BigInt) -> Self {
        assert!(root.is_positive(), "surd part must be positive");
        if rat.is_zero() || root.is_one() {
            return ExactScalar {
                rat,
                root: BigInt::one(),
            };
        }
        let (outside, rem) = extract_square(&root);
        ExactScalar {
            rat: rat * BigRational::from_integer(outside),
            root: rem,
        }
    }

    pub fn rational(r: BigRational) -> Self {
        ExactScalar {
            rat: r,
            root: BigInt::one(),
        }
    }

    pub fn integer(i: i64) -> Self {
        Self::rational(BigRational::from_integer(big(i)))
    }

    pub fn fraction(n: i64, d: i64) -> Self {
        Self::rational(ratio(n, d))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero()
    }

    /// `Some(r)` when the scalar is a plain rational.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.root.is_one() {
            Some(&self.rat)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Self {
        ExactScalar {
            rat: -self.rat.clone(),
            root: self.root.clone(),
        }
    }

    pub fn abs(&self) -> Self {
        ExactScalar {
            rat: self.rat.abs(),
            root: self.root.clone(),
        }
    }

    pub fn signum(&self) -> i32 {
        if self.rat.is_zero() {
            0
        } else if self.rat.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Addition within the grammar: surd classes must match (after square
    /// extraction), otherwise the sum leaves the representable set.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.root == other.root {
            return Ok(ExactScalar::new(
                self.rat.clone() + other.rat.clone(),
                self.root.clone(),
            ));
        }
        Err(Error::NonRepresentable(format!(
            "cannot add scalars with different surd parts sqrt({}) and sqrt({})",
            self.root, other.root
        )))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        ExactScalar::new(
            self.rat.clone() * other.rat.clone(),
            self.root.clone() * other.root.clone(),
        )
    }

    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        if other.is_zero() {
            return Err(Error::NonRepresentable("division by zero scalar".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        // (a sqrt(r)) / (b sqrt(s)) = (a / (b s)) sqrt(r s).
        Ok(ExactScalar::new(
            self.rat.clone() / (other.rat.clone() * BigRational::from_integer(other.root.clone())),
            self.root.clone() * other.root.clone(),
        ))
    }

    /// Square root; defined for nonnegative plain rationals.
    pub fn sqrt(&self) -> Result<Self, Error> {
        if self.signum() < 0 {
            return Err(Error::NonRepresentable(
                "square root of a negative scalar".into(),
            ));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if !self.root.is_one() {
            return Err(Error::NonRepresentable(
                "nested radicals are outside the grammar".into(),
            ));
        }
        // sqrt(p/q) = sqrt(p q) / q.
        let p = self.rat.numer().clone();
        let q = self.rat.denom().clone();
        Ok(ExactScalar::new(
            BigRational::new(BigInt::one(), q.clone()),
            p * q,
        ))
    }

    /// `base^(num/den)` for a positive rational base, `den ∈ {1, 2}`.
    pub fn rational_power(base: &BigRational, exponent: &BigRational) -> Result<Self, Error> {
        if !base.is_positive() {
            return Err(Error::NonRepresentable(
                "rational powers require a positive base".into(),
            ));
        }
        let den = exponent.denom();
        let num = exponent.numer();
        let int_pow = |e: &BigInt| -> BigRational {
            let ei = e.to_i32().expect("exponent fits in i32");
            base.pow(ei)
        };
        if den.is_one() {
            return Ok(Self::rational(int_pow(num)));
        }
        if *den == big(2) {
            // num/2 = k + r/2 with r in {0, 1}.
            let two = big(2);
            let (k, r) = num.div_mod_floor(&two);
            let whole = Self::rational(int_pow(&k));
            if r.is_zero() {
                return Ok(whole);
            }
            let root = Self::rational(base.clone()).sqrt()?;
            return Ok(whole.mul(&root));
        }
        Err(Error::NonRepresentable(format!(
            "exponent denominator {den} is outside the grammar"
        )))
    }

    pub fn to_f64(&self) -> f64 {
        let rat = self.rat.to_f64().unwrap_or(f64::NAN);
        if self.root.is_one() {
            rat
        } else {
            rat * self.root.to_f64().unwrap_or(f64::NAN).sqrt()
        }
    }

    /// Exact total order (compare via squares, respecting signs).
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self.signum(), other.signum()) {
            (a, b) if a != b => a.cmp(&b),
            (0, 0) => Ordering::Equal,
            (sign, _) => {
                let lhs = self.rat.clone()
                    * self.rat.clone()
                    * BigRational::from_integer(self.root.clone());
                let rhs = other.rat.clone()
                    * other.rat.clone()
                    * BigRational::from_integer(other.root.clone());
                if sign > 0 {
                    lhs.cmp(&rhs)
                } else {
                    rhs.cmp(&lhs)
                }
            }
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root.is_one() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_one() {
            write!(f, "sqrt({})", self.root)
        } else {
            write!(f, "{}*sqrt({})", self.rat, self.root)
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactScalar", 4)?;
        s.serialize_field("numer", &self.rat.numer().to_string())?;
        s.serialize_field("denom", &self.rat.denom().to_string())?;
        s.serialize_field("root", &self.root.to_string())?;
        s.serialize_field("approx", &self.to_f64())?;
        s.end()
    }
}

// ---------------------------------------------------------------------------
// Terms and entry rules

/// One summand `coeff * (n + shift)^exponent` of an entry rule. Constant
/// terms are normalized to `exponent == 0, shift == 0`; non-constant terms
/// have `exponent < 0` (entries must stay bounded) and `shift > -1` so the
/// base is positive for every `n >= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: ExactScalar,
    pub shift: BigRational,
    pub exponent: BigRational,
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Term", 4)?;
        s.serialize_field("coeff", &self.coeff)?;
        s.serialize_field("shift", &self.shift.to_string())?;
        s.serialize_field("exponent", &self.exponent.to_string())?;
        s.serialize_field("display", &self.to_string())?;
        s.end()
    }
}

impl Term {
    pub fn constant(coeff: ExactScalar) -> Self {
        Term {
            coeff,
            shift: BigRational::zero(),
            exponent: BigRational::zero(),
        }
    }

    pub fn new(
        coeff: ExactScalar,
        shift: BigRational,
        exponent: BigRational,
    ) -> Result<Self, Error> {
        if coeff.is_zero() || exponent.is_zero() {
            return Ok(Term::constant(coeff));
        }
        if exponent.is_positive() {
            return Err(Error::NonRepresentable(
                "positive exponents produce unbounded entries".into(),
            ));
        }
        if *exponent.denom() > big(2) {
            return Err(Error::NonRepresentable(format!(
                "exponent {exponent} has denominator outside {{1, 2}}"
            )));
        }
        if shift <= ratio(-1, 1) {
            return Err(Error::NonRepresentable(format!(
                "shift {shift} makes the base non-positive at n = 1"
            )));
        }
        Ok(Term {
            coeff,
            shift,
            exponent,
        })
    }

    /// Build from the affine form `c * (alpha n + beta)^q` by normalizing
    /// to a monic base: `(alpha n + beta)^q = alpha^q (n + beta/alpha)^q`.
    pub fn from_affine(
        c: ExactScalar,
        alpha: BigRational,
        beta: BigRational,
        q: BigRational,
    ) -> Result<Self, Error> {
        if alpha.is_zero() {
            if q.is_zero() {
                return Ok(Term::constant(c));
            }
            let base_pow = ExactScalar::rational_power(&beta, &q)?;
            return Ok(Term::constant(c.mul(&base_pow)));
        }
        if !alpha.is_positive() {
            return Err(Error::NonRepresentable(
                "leading coefficient of the base must be positive".into(),
            ));
        }
        let scale = ExactScalar::rational_power(&alpha, &q)?;
        Term::new(c.mul(&scale), beta / alpha, q)
    }

    pub fn is_constant(&self) -> bool {
        self.exponent.is_zero()
    }

    /// Exact value at index `n >= 1` within the parity class.
    pub fn eval(&self, n: u64) -> Result<ExactScalar, Error> {
        if self.is_constant() {
            return Ok(self.coeff.clone());
        }
        let base = BigRational::from_integer(big(n as i64)) + self.shift.clone();
        let pow = ExactScalar::rational_power(&base, &self.exponent)?;
        Ok(self.coeff.mul(&pow))
    }

    /// Limit as `n -> ∞`: the coefficient for constants, zero otherwise.
    pub fn limit(&self) -> ExactScalar {
        if self.is_constant() {
            self.coeff.clone()
        } else {
            ExactScalar::zero()
        }
    }

    fn key(&self) -> (BigRational, BigRational) {
        (self.exponent.clone(), self.shift.clone())
    }

    fn mul(&self, other: &Self) -> Result<Self, Error> {
        let coeff = self.coeff.mul(&other.coeff);
        if self.is_constant() {
            return Term::new(coeff, other.shift.clone(), other.exponent.clone());
        }
        if other.is_constant() {
            return Term::new(coeff, self.shift.clone(), self.exponent.clone());
        }
        if self.shift != other.shift {
            return Err(Error::NonRepresentable(format!(
                "product of bases with different shifts {} and {}",
                self.shift, other.shift
            )));
        }
        Term::new(
            coeff,
            self.shift.clone(),
            self.exponent.clone() + other.exponent.clone(),
        )
    }

    fn div(&self, other: &Self) -> Result<Self, Error> {
        let coeff = self.coeff.div(&other.coeff)?;
        if other.is_constant() {
            return Term::new(coeff, self.shift.clone(), self.exponent.clone());
        }
        if self.is_constant() || self.shift != other.shift {
            return Err(Error::NonRepresentable(
                "quotient leaves the single-base grammar".into(),
            ));
        }
        let exponent = self.exponent.clone() - other.exponent.clone();
        if exponent.is_positive() {
            return Err(Error::NonRepresentable(
                "quotient has unbounded entries".into(),
            ));
        }
        Term::new(coeff, self.shift.clone(), exponent)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_constant() {
            return write!(f, "{}", self.coeff);
        }
        if self.shift.is_zero() {
            write!(f, "{} * n^({})", self.coeff, self.exponent)
        } else {
            write!(
                f,
                "{} * (n + {})^({})",
                self.coeff, self.shift, self.exponent
            )
        }
    }
}

/// Finite sum of terms; the entry rule of one parity class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolicEntryRule {
    terms: Vec<Term>,
}

impl SymbolicEntryRule {
    pub fn zero() -> Self {
        SymbolicEntryRule { terms: Vec::new() }
    }

    pub fn constant(c: ExactScalar) -> Self {
        SymbolicEntryRule {
            terms: vec![Term::constant(c)],
        }
        .canonical()
    }

    pub fn from_terms(terms: Vec<Term>) -> Self {
        SymbolicEntryRule { terms }.canonical()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Sort by (exponent, shift) and merge mergeable like terms; drop zeros.
    fn canonical(mut self) -> Self {
        self.terms.sort_by(|a, b| {
            a.exponent
                .cmp(&b.exponent)
                .reverse()
                .then(a.shift.cmp(&b.shift))
        });
        let mut merged: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms.into_iter() {
            if t.coeff.is_zero() {
                continue;
            }
            if let Some(last) = merged.last_mut() {
                if last.key() == t.key() {
                    if let Ok(sum) = last.coeff.add(&t.coeff) {
                        last.coeff = sum;
                        continue;
                    }
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coeff.is_zero());
        SymbolicEntryRule { terms: merged }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SymbolicEntryRule { terms }.canonical()
    }

    pub fn neg(&self) -> Self {
        SymbolicEntryRule {
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.neg(),
                    shift: t.shift.clone(),
                    exponent: t.exponent.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b)?);
            }
        }
        Ok(SymbolicEntryRule { terms }.canonical())
    }

    /// Entrywise square root; only monomial (or zero) rules stay in the
    /// grammar.
    pub fn sqrt(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Ok(Self::zero());
        }
        if self.terms.len() != 1 {
            return Err(Error::NonMonomialRule);
        }
        let t = &self.terms[0];
        let coeff = t.coeff.sqrt()?;
        let exponent = t.exponent.clone() / ratio(2, 1);
        if !t.is_constant() && *exponent.denom() > big(2) {
            return Err(Error::NonRepresentable(
                "square root exponent leaves the grammar".into(),
            ));
        }
        if t.is_constant() {
            Ok(SymbolicEntryRule::constant(coeff))
        } else {
            Ok(SymbolicEntryRule::from_terms(vec![Term::new(
                coeff,
                t.shift.clone(),
                exponent,
            )?]))
        }
    }

    /// Termwise quotient by a monomial rule.
    pub fn div(&self, other: &Self) -> Result<Self, Error> {
        if other.is_zero() {
            if self.is_zero() {
                return Ok(Self::zero());
            }
            return Err(Error::NonRepresentable("division by the zero rule".into()));
        }
        if other.terms.len() != 1 {
            return Err(Error::NonMonomialRule);
        }
        let d = &other.terms[0];
        let terms: Result<Vec<Term>, Error> = self.terms.iter().map(|t| t.div(d)).collect();
        Ok(SymbolicEntryRule { terms: terms? }.canonical())
    }

    pub fn eval(&self, n: u64) -> Result<ExactScalar, Error> {
        let mut acc = ExactScalar::zero();
        for t in &self.terms {
            acc = acc.add(&t.eval(n)?)?;
        }
        Ok(acc)
    }

    /// Exact limit as `n -> ∞`: sum of the constant coefficients.
    pub fn limit(&self) -> Result<ExactScalar, Error> {
        let mut acc = ExactScalar::zero();
        for t in &self.terms {
            acc = acc.add(&t.limit())?;
        }
        Ok(acc)
    }

    /// Upper bound on `Σ |c_i| (n + s_i)^{e_i}` over the non-constant
    /// terms, valid for every `n >= at`; the bound is the exact value at
    /// `n = at` since each summand decreases.
    fn tail_bound(&self, at: u64) -> Result<ExactScalar, Error> {
        let mut acc = ExactScalar::zero();
        for t in &self.terms {
            if !t.is_constant() {
                acc = acc.add(&t.eval(at)?.abs())?;
            }
        }
        Ok(acc)
    }

    /// Rigorous nonnegativity: either every coefficient is nonnegative, or
    /// the limit strictly dominates the decaying part beyond a checked
    /// prefix. Returns `false` when neither argument applies (conservative).
    pub fn provably_nonneg(&self) -> bool {
        if self.terms.iter().all(|t| t.coeff.signum() >= 0) {
            return true;
        }
        let Ok(limit) = self.limit() else {
            return false;
        };
        if limit.signum() < 0 {
            return false;
        }
        if limit.is_zero() {
            return false;
        }
        // Find a cutoff beyond which the sum of |non-constant terms| is at
        // most the limit, then check the prefix exactly.
        let mut cutoff: u64 = 16;
        loop {
            match self.tail_bound(cutoff) {
                Ok(b) if b.cmp_exact(&limit) != Ordering::Greater => break,
                Ok(_) if cutoff < (1 << 20) => cutoff *= 2,
                _ => return false,
            }
        }
        for n in 1..=cutoff {
            match self.eval(n) {
                Ok(v) if v.signum() >= 0 => {}
                _ => return false,
            }
        }
        true
    }

    /// Whether the nonzero entries are bounded away from zero. With every
    /// rule eventually monotone, this reduces to: the rule is identically
    /// zero, or its limit is nonzero (the finitely many exceptional leading
    /// entries cannot spoil a positive infimum).
    pub fn bounded_away_from_zero(&self) -> Result<bool, Error> {
        if self.is_zero() {
            return Ok(true);
        }
        Ok(!self.limit()?.is_zero())
    }
}

impl fmt::Display for SymbolicEntryRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

// ---------------------------------------------------------------------------
// Parity-diagonal operators

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
}

/// Diagonal operator with one entry rule per parity class: the rule for the
/// odd class gives the entry at basis vector `e_{2n-1}`, the even rule at
/// `e_{2n}`, both evaluated at `n >= 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParityDiagonal {
    pub odd: SymbolicEntryRule,
    pub even: SymbolicEntryRule,
}

impl ParityDiagonal {
    pub fn new(odd: SymbolicEntryRule, even: SymbolicEntryRule) -> Self {
        ParityDiagonal { odd, even }
    }

    pub fn zero() -> Self {
        ParityDiagonal {
            odd: SymbolicEntryRule::zero(),
            even: SymbolicEntryRule::zero(),
        }
    }

    pub fn identity() -> Self {
        ParityDiagonal {
            odd: SymbolicEntryRule::constant(ExactScalar::one()),
            even: SymbolicEntryRule::constant(ExactScalar::one()),
        }
    }

    pub fn scalar(c: ExactScalar) -> Self {
        ParityDiagonal {
            odd: SymbolicEntryRule::constant(c.clone()),
            even: SymbolicEntryRule::constant(c),
        }
    }

    /// Projection onto the closed span of the odd-indexed basis vectors.
    pub fn odd_projection() -> Self {
        ParityDiagonal {
            odd: SymbolicEntryRule::constant(ExactScalar::one()),
            even: SymbolicEntryRule::zero(),
        }
    }

    /// Exact entry at global basis index `j >= 1`.
    pub fn entry(&self, j: u64) -> Result<ExactScalar, Error> {
        assert!(j >= 1, "basis indices start at 1");
        if j % 2 == 1 {
            self.odd.eval(j.div_ceil(2))
        } else {
            self.even.eval(j / 2)
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ParityDiagonal {
            odd: self.odd.add(&other.odd),
            even: self.even.add(&other.even),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ParityDiagonal {
            odd: self.odd.sub(&other.odd),
            even: self.even.sub(&other.even),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        Ok(ParityDiagonal {
            odd: self.odd.mul(&other.odd)?,
            even: self.even.mul(&other.even)?,
        })
    }

    pub fn sqrt(&self) -> Result<Self, Error> {
        Ok(ParityDiagonal {
            odd: self.odd.sqrt()?,
            even: self.even.sqrt()?,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.odd.is_zero() && self.even.is_zero()
    }

    /// Entries are real by construction, so every operator here is
    /// self-adjoint.
    pub fn is_self_adjoint(&self) -> bool {
        true
    }

    pub fn is_positive(&self) -> bool {
        self.odd.provably_nonneg() && self.even.provably_nonneg()
    }

    /// Exact parity-class limits `(odd, even)`.
    pub fn limits(&self) -> Result<(ExactScalar, ExactScalar), Error> {
        Ok((self.odd.limit()?, self.even.limit()?))
    }

    /// Membership in the compact-plus-scalar algebra: both parity limits
    /// must exist in the grammar and coincide (the common value is the
    /// scalar part; the remainder has entries tending to zero).
    pub fn in_algebra(&self) -> Result<bool, Error> {
        let (o, e) = self.limits()?;
        Ok(o == e)
    }

    /// The scalar part when the operator is a member of the algebra.
    pub fn lambda_part(&self) -> Result<Option<ExactScalar>, Error> {
        let (o, e) = self.limits()?;
        Ok(if o == e { Some(o) } else { None })
    }

    /// Closed range / Moore-Penrose invertibility for a diagonal operator:
    /// the nonzero entries must be bounded away from zero, decided exactly
    /// from the class limits.
    pub fn is_mp_invertible(&self) -> Result<bool, Error> {
        Ok(self.odd.bounded_away_from_zero()? && self.even.bounded_away_from_zero()?)
    }

    /// `N x N` floating-point truncation (global indices `1..=N`).
    pub fn truncate(&self, n: usize) -> Result<ComplexMatrix, Error> {
        let mut m = ComplexMatrix::zeros(n, n);
        for j in 1..=n {
            let v = self.entry(j as u64)?;
            m[(j - 1, j - 1)] = Complex64::new(v.to_f64(), 0.0);
        }
        Ok(m)
    }
}

impl fmt::Display for ParityDiagonal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "odd: {} | even: {}", self.odd, self.even)
    }
}

// ---------------------------------------------------------------------------
// The canonical compact positive pair

/// `A1 e_{2n-1} = e_{2n-1}/(2n-1)`, `A1 e_{2n} = 0`: compact, positive,
/// injective on the odd class.
pub fn build_a1() -> ParityDiagonal {
    let term = Term::from_affine(ExactScalar::one(), ratio(2, 1), ratio(-1, 1), ratio(-1, 1))
        .expect("within grammar");
    ParityDiagonal {
        odd: SymbolicEntryRule::from_terms(vec![term]),
        even: SymbolicEntryRule::zero(),
    }
}

/// `B1 e_{2n-1} = 0`, `B1 e_{2n} = e_{2n}/(2n)`.
pub fn build_b1() -> ParityDiagonal {
    let term = Term::from_affine(ExactScalar::one(), ratio(2, 1), ratio(0, 1), ratio(-1, 1))
        .expect("within grammar");
    ParityDiagonal {
        odd: SymbolicEntryRule::zero(),
        even: SymbolicEntryRule::from_terms(vec![term]),
    }
}

/// Entrywise square root of a positive parity diagonal.
pub fn diag_sqrt(x: &ParityDiagonal) -> Result<ParityDiagonal, Error> {
    if !x.is_positive() {
        return Err(Error::NotPositive {
            reason: "entrywise square root needs a positive diagonal".into(),
        });
    }
    x.sqrt()
}

/// Formal entrywise parallel sum of two commuting positive diagonals:
/// `(a:b)_n = a_n b_n / (a_n + b_n)` wherever the denominator is nonzero
/// (and zero elsewhere). Requires the quotient to stay in the grammar.
pub fn diag_parallel_sum(a: &ParityDiagonal, b: &ParityDiagonal) -> Result<ParityDiagonal, Error> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::NotPositive {
            reason: "entrywise parallel sum needs positive diagonals".into(),
        });
    }
    let num = a.mul(b)?;
    let den = a.add(b);
    Ok(ParityDiagonal {
        odd: num.odd.div(&den.odd)?,
        even: num.even.div(&den.even)?,
    })
}

// ---------------------------------------------------------------------------
// The half-power factor equation

/// Outcome of `solve_halfpower`.
#[derive(Debug, Clone, Serialize)]
pub enum HalfPowerOutcome {
    /// The diagonal candidate lies in the algebra; the equation is solved.
    Solution(ParityDiagonal),
    /// No solution exists in the algebra; machine-checkable evidence.
    Unsolvable(Box<UnsolvabilityCertificate>),
}

/// Structured record of the scalar-part derivation: what constraints the
/// candidate forces on the scalar `lambda` of a hypothetical
/// compact-plus-scalar solution.
#[derive(Debug, Clone, Serialize)]
pub struct LambdaDerivation {
    /// The candidate is self-adjoint, forcing `lambda` to be real.
    pub self_adjoint: bool,
    /// The candidate is idempotent (`X^2 = X` exactly), forcing
    /// `lambda ∈ {0, 1}`.
    pub idempotent: bool,
    /// The forced candidate values of `lambda`.
    pub candidates: Vec<ExactScalar>,
}

/// The parity class on which a candidate scalar fails, with the exact
/// class limit that differs from it.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceFailure {
    pub lambda: ExactScalar,
    pub parity: Parity,
    pub class_limit: ExactScalar,
}

/// Machine-checkable evidence that the half-power equation has no solution:
/// the unique diagonal candidate, the forced scalar candidates, a recorded
/// parity-limit failure for each of them, and the exact distance of the
/// candidate from the compact-plus-scalar algebra.
#[derive(Debug, Clone, Serialize)]
pub struct UnsolvabilityCertificate {
    pub forced_candidate: ParityDiagonal,
    pub odd_limit: ExactScalar,
    pub even_limit: ExactScalar,
    pub lambda_constraints: LambdaDerivation,
    pub convergence_failures: Vec<ConvergenceFailure>,
    /// `|odd_limit - even_limit| / 2`: the exact lower bound on the
    /// distance from the candidate to any compact-plus-scalar operator.
    pub calkin_lower_bound: ExactScalar,
}

impl UnsolvabilityCertificate {
    /// A certificate is accepted only if every scalar candidate has a
    /// recorded parity-limit failure that indeed fails, and the distance
    /// bound matches the limits.
    pub fn validate(&self) -> bool {
        if self.odd_limit == self.even_limit {
            return false;
        }
        if self.lambda_constraints.candidates.is_empty() {
            return false;
        }
        for lambda in &self.lambda_constraints.candidates {
            let found = self.convergence_failures.iter().any(|f| {
                &f.lambda == lambda
                    && f.class_limit != *lambda
                    && match f.parity {
                        Parity::Odd => f.class_limit == self.odd_limit,
                        Parity::Even => f.class_limit == self.even_limit,
                    }
            });
            if !found {
                return false;
            }
        }
        let expected = self
            .odd_limit
            .sub(&self.even_limit)
            .map(|d| d.abs().mul(&ExactScalar::fraction(1, 2)));
        matches!(expected, Ok(e) if e == self.calkin_lower_bound)
    }
}

/// Solve `A^(1/2) = (A+B)^(1/2) X` for a diagonal `X` over the algebra.
///
/// The diagonal candidate is forced entrywise:
/// `x_n = sqrt(a_n) / sqrt(a_n + b_n)` where the denominator is nonzero and
/// `x_n = 0` elsewhere. If its parity limits agree the candidate lies in
/// the algebra and solves the equation; otherwise no member of the algebra
/// can solve it, and the returned certificate replays why.
pub fn solve_halfpower(a: &ParityDiagonal, b: &ParityDiagonal) -> Result<HalfPowerOutcome, Error> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::NotPositive {
            reason: "the half-power equation is posed for positive operators".into(),
        });
    }
    let sum = a.add(b);
    let sqrt_a = diag_sqrt(a)?;
    let sqrt_sum = diag_sqrt(&sum)?;

    let class_candidate =
        |num: &SymbolicEntryRule, den: &SymbolicEntryRule| -> Result<SymbolicEntryRule, Error> {
            if den.is_zero() {
                // Positivity forces the numerator to vanish with the sum.
                if num.is_zero() {
                    Ok(SymbolicEntryRule::zero())
                } else {
                    Err(Error::NonRepresentable(
                        "numerator nonzero where the sum vanishes".into(),
                    ))
                }
            } else {
                num.div(den)
            }
        };

    let candidate = ParityDiagonal {
        odd: class_candidate(&sqrt_a.odd, &sqrt_sum.odd)?,
        even: class_candidate(&sqrt_a.even, &sqrt_sum.even)?,
    };

    if candidate.in_algebra()? {
        return Ok(HalfPowerOutcome::Solution(candidate));
    }

    let (odd_limit, even_limit) = candidate.limits()?;
    let idempotent = match candidate.mul(&candidate) {
        Ok(sq) => sq.sub(&candidate).is_zero(),
        Err(_) => false,
    };
    let candidates = if idempotent {
        vec![ExactScalar::integer(0), ExactScalar::integer(1)]
    } else {
        let mut v = vec![odd_limit.clone()];
        if even_limit != odd_limit {
            v.push(even_limit.clone());
        }
        v
    };
    let mut failures = Vec::new();
    for lambda in &candidates {
        if odd_limit != *lambda {
            failures.push(ConvergenceFailure {
                lambda: lambda.clone(),
                parity: Parity::Odd,
                class_limit: odd_limit.clone(),
            });
        }
        if even_limit != *lambda {
            failures.push(ConvergenceFailure {
                lambda: lambda.clone(),
                parity: Parity::Even,
                class_limit: even_limit.clone(),
            });
        }
    }
    let calkin = odd_limit
        .sub(&even_limit)?
        .abs()
        .mul(&ExactScalar::fraction(1, 2));
    Ok(HalfPowerOutcome::Unsolvable(Box::new(
        UnsolvabilityCertificate {
            forced_candidate: candidate,
            odd_limit,
            even_limit,
            lambda_constraints: LambdaDerivation {
                self_adjoint: true,
                idempotent,
                candidates,
            },
            convergence_failures: failures,
            calkin_lower_bound: calkin,
        },
    )))
}

/// Exact lower bound `|l_odd - l_even| / 2` on the distance from a
/// candidate with distinct parity limits to the compact-plus-scalar
/// algebra, cross-checked against a scalar grid search of the given size
/// when the limits are rational.
pub fn calkin_distance_bound(
    candidate: &ParityDiagonal,
    grid_size: usize,
) -> Result<ExactScalar, Error> {
    let (l1, l2) = candidate.limits()?;
    if l1 == l2 {
        return Err(Error::EqualLimits);
    }
    let bound = l1.sub(&l2)?.abs().mul(&ExactScalar::fraction(1, 2));
    if let (Some(r1), Some(r2)) = (l1.as_rational(), l2.as_rational()) {
        let lo = r1.min(r2).clone();
        let hi = r1.max(r2).clone();
        let steps = grid_size.max(2) - 1;
        for k in 0..=steps {
            let lambda = &lo + (&hi - &lo) * BigRational::new(big(k as i64), big(steps as i64));
            let d1 = (r1 - &lambda).abs();
            let d2 = (r2 - &lambda).abs();
            let dev = ExactScalar::rational(d1.max(d2));
            if dev.cmp_exact(&bound) == Ordering::Less {
                return Err(Error::NonRepresentable(format!(
                    "grid search found deviation {dev} below the bound {bound}"
                )));
            }
        }
    }
    Ok(bound)
}

// ---------------------------------------------------------------------------
// The non-invertible parallel sum witness

/// Exact witness that the parallel sum of an algebra pair can fail to be
/// M-P invertible when one summand is not: `A e_n = e_n/(n+1)` (compact,
/// range not closed), `B = I - A` (invertible), so `A + B = I` while
/// `A:B = A - A^2` has positive entries tending to zero.
#[derive(Debug, Clone, Serialize)]
pub struct NonInvertibleWitness {
    pub a: ParityDiagonal,
    pub b: ParityDiagonal,
    pub parallel: ParityDiagonal,
    pub a_mp_invertible: bool,
    pub b_mp_invertible: bool,
    pub sum_is_identity: bool,
    pub sum_mp_invertible: bool,
    pub parallel_mp_invertible: bool,
    /// Exact value of the parallel sum at the first basis vector (1/4).
    pub parallel_entry_1: ExactScalar,
    /// Both sides of the invertibility equivalence are false together.
    pub consistent: bool,
}

pub fn prop45_witness() -> Result<NonInvertibleWitness, Error> {
    // Global rule 1/(n+1): on e_{2n-1} this is 1/(2n), on e_{2n} 1/(2n+1).
    let odd = SymbolicEntryRule::from_terms(vec![Term::from_affine(
        ExactScalar::one(),
        ratio(2, 1),
        ratio(0, 1),
        ratio(-1, 1),
    )?]);
    let even = SymbolicEntryRule::from_terms(vec![Term::from_affine(
        ExactScalar::one(),
        ratio(2, 1),
        ratio(1, 1),
        ratio(-1, 1),
    )?]);
    let a = ParityDiagonal::new(odd, even);
    let b = ParityDiagonal::identity().sub(&a);
    let sum = a.add(&b);
    let parallel = diag_parallel_sum(&a, &b)?;

    let witness = NonInvertibleWitness {
        a_mp_invertible: a.is_mp_invertible()?,
        b_mp_invertible: b.is_mp_invertible()?,
        sum_is_identity: sum.sub(&ParityDiagonal::identity()).is_zero(),
        sum_mp_invertible: sum.is_mp_invertible()?,
        parallel_mp_invertible: parallel.is_mp_invertible()?,
        parallel_entry_1: parallel.entry(1)?,
        consistent: false,
        a,
        b,
        parallel,
    };
    // The equivalence "A and B both M-P invertible <=> A:B M-P invertible"
    // must see both sides fail together here.
    let both = witness.a_mp_invertible && witness.b_mp_invertible;
    Ok(NonInvertibleWitness {
        consistent: both == witness.parallel_mp_invertible,
        ..witness
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> ExactScalar {
        ExactScalar::fraction(1, 2)
    }

    proptest::proptest! {
        // Exact arithmetic: field laws hold on the wider surd grammar where
        // the operations are defined, and square roots invert squaring.
        #[test]
        fn exact_scalar_arithmetic_laws(
            an in -50i64..50, ad in 1i64..20, ar in 1i64..30,
            bn in -50i64..50, bd in 1i64..20, br in 1i64..30,
        ) {
            let a = ExactScalar::new(ratio(an, ad), big(ar));
            let b = ExactScalar::new(ratio(bn, bd), big(br));
            proptest::prop_assert_eq!(a.mul(&b), b.mul(&a));
            if let (Ok(ab), Ok(ba)) = (a.add(&b), b.add(&a)) {
                proptest::prop_assert_eq!(ab, ba);
            }
            if !b.is_zero() {
                let q = a.div(&b).unwrap();
                proptest::prop_assert_eq!(q.mul(&b), a.clone());
            }
            let sq = a.mul(&a);
            let root = sq.sqrt().unwrap();
            proptest::prop_assert_eq!(root, a.abs());
            proptest::prop_assert!((a.to_f64() - a.rat.to_f64().unwrap() * a.root.to_f64().unwrap().sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn scalar_arithmetic_and_canonicalization() {
        // sqrt(8) = 2 sqrt(2).
        let s = ExactScalar::new(BigRational::one(), big(8));
        assert_eq!(s, ExactScalar::new(ratio(2, 1), big(2)));
        // sqrt(9) = 3.
        let t = ExactScalar::integer(9).sqrt().unwrap();
        assert_eq!(t, ExactScalar::integer(3));
        // sqrt(1/2) = (1/2) sqrt(2).
        let r = half().sqrt().unwrap();
        assert_eq!(r, ExactScalar::new(ratio(1, 2), big(2)));
        // (1/2) sqrt(2) * (1/2) sqrt(2) = 1/2.
        assert_eq!(r.mul(&r), half());
        // sqrt(2) + sqrt(2) = 2 sqrt(2); sqrt(2) + sqrt(3) leaves grammar.
        let rt2 = ExactScalar::new(BigRational::one(), big(2));
        let rt3 = ExactScalar::new(BigRational::one(), big(3));
        assert_eq!(
            rt2.add(&rt2).unwrap(),
            ExactScalar::new(ratio(2, 1), big(2))
        );
        assert!(rt2.add(&rt3).is_err());
        // sqrt(2) + sqrt(8) = 3 sqrt(2): different written roots, same class.
        let rt8 = ExactScalar::new(BigRational::one(), big(8));
        assert_eq!(
            rt2.add(&rt8).unwrap(),
            ExactScalar::new(ratio(3, 1), big(2))
        );
        // division: 1 / sqrt(2) = (1/2) sqrt(2).
        let inv = ExactScalar::one().div(&rt2).unwrap();
        assert_eq!(inv, ExactScalar::new(ratio(1, 2), big(2)));
        // exact comparison: (1/2) sqrt(2) < 1 < sqrt(2).
        assert_eq!(inv.cmp_exact(&ExactScalar::one()), Ordering::Less);
        assert_eq!(rt2.cmp_exact(&ExactScalar::one()), Ordering::Greater);
    }

    #[test]
    fn rational_powers() {
        // 4^(-1/2) = 1/2.
        let v = ExactScalar::rational_power(&ratio(4, 1), &ratio(-1, 2)).unwrap();
        assert_eq!(v, half());
        // 2^(-3/2) = (1/4) sqrt(2).
        let v = ExactScalar::rational_power(&ratio(2, 1), &ratio(-3, 2)).unwrap();
        assert_eq!(v, ExactScalar::new(ratio(1, 4), big(2)));
        // 27^(1/3) is outside the grammar.
        assert!(ExactScalar::rational_power(&ratio(27, 1), &ratio(1, 3)).is_err());
    }

    #[test]
    fn a1_and_b1_entries() {
        let a1 = build_a1();
        let b1 = build_b1();
        assert_eq!(a1.entry(1).unwrap(), ExactScalar::one()); // e_1 -> 1/(2*1-1)
        assert_eq!(a1.entry(2).unwrap(), ExactScalar::zero());
        assert_eq!(a1.entry(5).unwrap(), ExactScalar::fraction(1, 5));
        assert_eq!(b1.entry(4).unwrap(), ExactScalar::fraction(1, 4));
        assert_eq!(b1.entry(3).unwrap(), ExactScalar::zero());
        // A1 + B1 has entry 1/n at every global index n.
        let sum = a1.add(&b1);
        for j in 1..=32u64 {
            assert_eq!(
                sum.entry(j).unwrap(),
                ExactScalar::rational(BigRational::new(BigInt::one(), big(j as i64))),
                "entry {j}"
            );
        }
        assert!(a1.is_positive() && b1.is_positive());
        assert!(a1.in_algebra().unwrap() && b1.in_algebra().unwrap());
        assert_eq!(a1.lambda_part().unwrap(), Some(ExactScalar::zero()));
    }

    #[test]
    fn sqrt_of_canonical_operators() {
        let a1 = build_a1();
        let s = diag_sqrt(&a1).unwrap();
        // odd entries (2n-1)^(-1/2): at n=1 -> 1, at j=5 (n=3) -> 5^(-1/2).
        assert_eq!(s.entry(1).unwrap(), ExactScalar::one());
        let e5 = s.entry(5).unwrap();
        assert_eq!(e5.mul(&e5), ExactScalar::fraction(1, 5));

        let sum = build_a1().add(&build_b1());
        let rs = diag_sqrt(&sum).unwrap();
        for j in [1u64, 2, 3, 9, 16] {
            let v = rs.entry(j).unwrap();
            assert_eq!(
                v.mul(&v),
                ExactScalar::rational(BigRational::new(BigInt::one(), big(j as i64)))
            );
        }
        assert!(diag_sqrt(&ParityDiagonal::identity())
            .unwrap()
            .sub(&ParityDiagonal::identity())
            .is_zero());
    }

    #[test]
    fn sqrt_rejects_multi_term_rules() {
        let sum_with_id = build_a1().add(&ParityDiagonal::identity());
        assert!(matches!(
            diag_sqrt(&sum_with_id),
            Err(Error::NonMonomialRule)
        ));
    }

    #[test]
    fn mp_invertibility_cases() {
        assert!(ParityDiagonal::identity().is_mp_invertible().unwrap());
        let sum = build_a1().add(&build_b1());
        assert!(!sum.is_mp_invertible().unwrap());
        let shifted = sum.add(&ParityDiagonal::identity());
        assert!(shifted.is_mp_invertible().unwrap());
        // Zero operator has closed range trivially.
        assert!(ParityDiagonal::zero().is_mp_invertible().unwrap());
    }

    #[test]
    fn halfpower_certificate_for_canonical_pair() {
        let out = solve_halfpower(&build_a1(), &build_b1()).unwrap();
        let cert = match out {
            HalfPowerOutcome::Unsolvable(c) => c,
            HalfPowerOutcome::Solution(x) => panic!("unexpected solution {x}"),
        };
        // The forced candidate is the odd-class projection.
        assert!(cert
            .forced_candidate
            .sub(&ParityDiagonal::odd_projection())
            .is_zero());
        assert_eq!(cert.odd_limit, ExactScalar::one());
        assert_eq!(cert.even_limit, ExactScalar::zero());
        assert!(cert.lambda_constraints.self_adjoint);
        assert!(cert.lambda_constraints.idempotent);
        assert_eq!(
            cert.lambda_constraints.candidates,
            vec![ExactScalar::integer(0), ExactScalar::integer(1)]
        );
        assert_eq!(cert.calkin_lower_bound, half());
        assert!(cert.validate());
        // lambda = 0 fails on the odd class, lambda = 1 on the even class.
        assert!(cert
            .convergence_failures
            .iter()
            .any(|f| { f.lambda == ExactScalar::integer(0) && f.parity == Parity::Odd }));
        assert!(cert
            .convergence_failures
            .iter()
            .any(|f| { f.lambda == ExactScalar::integer(1) && f.parity == Parity::Even }));
    }

    #[test]
    fn halfpower_with_b_zero_still_unsolvable() {
        let out = solve_halfpower(&build_a1(), &ParityDiagonal::zero()).unwrap();
        match out {
            HalfPowerOutcome::Unsolvable(cert) => {
                assert!(cert.validate());
                assert!(cert
                    .forced_candidate
                    .sub(&ParityDiagonal::odd_projection())
                    .is_zero());
            }
            HalfPowerOutcome::Solution(x) => panic!("unexpected solution {x}"),
        }
    }

    #[test]
    fn halfpower_scalar_case_solves() {
        let id = ParityDiagonal::identity();
        let out = solve_halfpower(&id, &id).unwrap();
        match out {
            HalfPowerOutcome::Solution(x) => {
                // X = (1/sqrt(2)) I.
                let expect = ParityDiagonal::scalar(half().sqrt().unwrap());
                assert!(x.sub(&expect).is_zero());
            }
            HalfPowerOutcome::Unsolvable(_) => panic!("scalar case must solve"),
        }
    }

    #[test]
    fn calkin_bound_values() {
        let p = ParityDiagonal::odd_projection();
        assert_eq!(calkin_distance_bound(&p, 101).unwrap(), half());

        // Limits 1 and -1 give bound 1.
        let pm = ParityDiagonal::new(
            SymbolicEntryRule::constant(ExactScalar::one()),
            SymbolicEntryRule::constant(ExactScalar::integer(-1)),
        );
        assert_eq!(calkin_distance_bound(&pm, 51).unwrap(), ExactScalar::one());

        assert!(matches!(
            calkin_distance_bound(&ParityDiagonal::identity(), 11),
            Err(Error::EqualLimits)
        ));
    }

    #[test]
    fn witness_of_non_invertible_parallel_sum() {
        let w = prop45_witness().unwrap();
        assert!(!w.a_mp_invertible);
        assert!(w.b_mp_invertible);
        assert!(w.sum_is_identity && w.sum_mp_invertible);
        assert!(!w.parallel_mp_invertible);
        assert_eq!(w.parallel_entry_1, ExactScalar::fraction(1, 4));
        assert!(w.consistent);
        // Entrywise cross-check at a few indices: (a:b)_j = a_j (1 - a_j).
        for j in [1u64, 2, 3, 10, 101] {
            let aj = w.a.entry(j).unwrap();
            let expect = aj.mul(&ExactScalar::one().sub(&aj).unwrap());
            assert_eq!(w.parallel.entry(j).unwrap(), expect, "entry {j}");
        }
    }

    #[test]
    fn entrywise_parallel_sum_matches_scalar_formula() {
        // Same-base monomial pair: a = 2 (n)^-1, b = 3 (n)^-1 per class.
        let mk = |c: i64| {
            let t = Term::from_affine(
                ExactScalar::integer(c),
                ratio(1, 1),
                ratio(0, 1),
                ratio(-1, 1),
            )
            .unwrap();
            ParityDiagonal::new(
                SymbolicEntryRule::from_terms(vec![t.clone()]),
                SymbolicEntryRule::from_terms(vec![t]),
            )
        };
        let a = mk(2);
        let b = mk(3);
        let ps = diag_parallel_sum(&a, &b).unwrap();
        for j in 1..=64u64 {
            let aj = a.entry(j).unwrap();
            let bj = b.entry(j).unwrap();
            let expect = aj.mul(&bj).div(&aj.add(&bj).unwrap()).unwrap();
            assert_eq!(ps.entry(j).unwrap(), expect, "entry {j}");
        }
    }

    #[test]
    fn truncation_matches_exact_entries_and_commutes() {
        let a1 = build_a1();
        let b1 = build_b1();
        for n in [8usize, 64, 512] {
            let ta = a1.truncate(n).unwrap();
            for j in 1..=n {
                let exact = a1.entry(j as u64).unwrap().to_f64();
                assert_eq!(ta[(j - 1, j - 1)].re, exact);
            }
            // Exact-level commutation of truncation with sum and product.
            let sum = a1.add(&b1);
            let prod = a1.mul(&b1).unwrap();
            for j in 1..=(n as u64) {
                assert_eq!(
                    sum.entry(j).unwrap(),
                    a1.entry(j).unwrap().add(&b1.entry(j).unwrap()).unwrap()
                );
                assert_eq!(
                    prod.entry(j).unwrap(),
                    a1.entry(j).unwrap().mul(&b1.entry(j).unwrap())
                );
            }
        }
    }

    #[test]
    fn positivity_of_mixed_sign_rule_with_dominating_limit() {
        // 1 - (1/2) n^-1 is nonnegative for all n >= 1.
        let t = Term::from_affine(half().neg(), ratio(1, 1), ratio(0, 1), ratio(-1, 1)).unwrap();
        let rule = SymbolicEntryRule::from_terms(vec![Term::constant(ExactScalar::one()), t]);
        assert!(rule.provably_nonneg());
        // 1/4 - n^-1 is negative at n = 1, 2, 3.
        let t = Term::from_affine(
            ExactScalar::integer(-1),
            ratio(1, 1),
            ratio(0, 1),
            ratio(-1, 1),
        )
        .unwrap();
        let rule =
            SymbolicEntryRule::from_terms(vec![Term::constant(ExactScalar::fraction(1, 4)), t]);
        assert!(!rule.provably_nonneg());
    }

    #[test]
    fn certificate_serializes_with_derivation_record() {
        let out = solve_halfpower(&build_a1(), &build_b1()).unwrap();
        if let HalfPowerOutcome::Unsolvable(cert) = out {
            let json = serde_json::to_string(&cert).unwrap();
            assert!(json.contains("lambda_constraints"));
            assert!(json.contains("convergence_failures"));
            assert!(json.contains("calkin_lower_bound"));
        } else {
            panic!("expected certificate");
        }
    }
}
