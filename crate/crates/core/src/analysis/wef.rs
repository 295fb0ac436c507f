//! Input-output weight enumerators and ensemble-average weight spectra,
//! in exact arithmetic.

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::AnalysisError;

/// C-OWEF of a block code: `coeff(i, w)` counts codewords of total weight
/// w produced by source blocks of weight i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCowef {
    n: usize,
    k: usize,
    q: u32,
    rows: Vec<Vec<BigInt>>,
}

impl BlockCowef {
    /// Table with `rows[i][w]`, i ∈ 0..=k, w ∈ 0..=n.
    pub fn new(n: usize, k: usize, q: u32, rows: Vec<Vec<BigInt>>) -> Result<Self, AnalysisError> {
        if rows.len() != k + 1 || rows.iter().any(|r| r.len() != n + 1) {
            return Err(AnalysisError::InvalidParameters(format!(
                "C-OWEF table must be {} × {}",
                k + 1,
                n + 1
            )));
        }
        if rows.iter().flatten().any(Signed::is_negative) {
            return Err(AnalysisError::InvalidParameters("negative C-OWEF entry".into()));
        }
        Ok(BlockCowef { n, k, q, rows })
    }

    /// The empty code (n = 0): every input maps to the empty word.
    pub fn empty(k: usize, q: u32) -> Self {
        let qm1 = BigInt::from(q - 1);
        let rows = (0..=k)
            .map(|i| vec![binomial(BigInt::from(k), BigInt::from(i)) * Pow::pow(&qm1, i)])
            .collect();
        BlockCowef { n: 0, k, q, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeff(&self, i: usize, w: usize) -> &BigInt {
        &self.rows[i][w]
    }

    /// Weight spectrum A_w = Σ_i coeff(i, w).
    pub fn spectrum(&self) -> Vec<BigInt> {
        (0..=self.n)
            .map(|w| self.rows.iter().map(|r| &r[w]).sum())
            .collect()
    }
}

/// C-OWEF of the binary (k+1, k) SPC code.
pub fn spc_cowef(k: usize) -> BlockCowef {
    let mut rows = vec![vec![BigInt::zero(); k + 2]; k + 1];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i + i % 2] = binomial(BigInt::from(k), BigInt::from(i));
    }
    BlockCowef { n: k + 1, k, q: 2, rows }
}

type Poly2 = Vec<Vec<BigInt>>;

fn poly2_mul(a: &Poly2, b: &Poly2) -> Poly2 {
    let rows = a.len() + b.len() - 1;
    let cols = a[0].len() + b[0].len() - 1;
    let mut out = vec![vec![BigInt::zero(); cols]; rows];
    for (i, ar) in a.iter().enumerate() {
        for (j, av) in ar.iter().enumerate() {
            if av.is_zero() {
                continue;
            }
            for (h, br) in b.iter().enumerate() {
                for (g, bv) in br.iter().enumerate() {
                    if !bv.is_zero() {
                        out[i + h][j + g] += av * bv;
                    }
                }
            }
        }
    }
    out
}

fn poly2_add(a: &mut Poly2, b: &Poly2, sign: i32) {
    let rows = a.len().max(b.len());
    let cols = a[0].len().max(b[0].len());
    a.resize(rows, vec![BigInt::zero(); cols]);
    for r in a.iter_mut() {
        r.resize(cols, BigInt::zero());
    }
    for (i, br) in b.iter().enumerate() {
        for (j, bv) in br.iter().enumerate() {
            if sign > 0 {
                a[i][j] += bv;
            } else {
                a[i][j] -= bv;
            }
        }
    }
}

/// (1 + s·x)^e as a polynomial in x alone.
fn binomial_x(e: u64, s: i64) -> Poly2 {
    (0..=e)
        .map(|i| vec![binomial(BigInt::from(e), BigInt::from(i)) * BigInt::from(s).pow(i as u32)])
        .collect()
}

/// (1 + s·X)^e as a polynomial in X alone.
fn binomial_big_x(e: u64, s: i64) -> Poly2 {
    vec![binomial_x(e, s).into_iter().map(|mut c| c.remove(0)).collect()]
}

/// (1 − xX)^t.
fn one_minus_x_big_x(t: u64) -> Poly2 {
    let mut out = vec![vec![BigInt::zero(); t as usize + 1]; t as usize + 1];
    for j in 0..=t as usize {
        let c = binomial(BigInt::from(t), BigInt::from(j));
        out[j][j] = if j % 2 == 0 { c } else { -c };
    }
    out
}

/// C-OWEF of the binary (2^t − 1, 2^t − 1 − t) Hamming code.
///
/// Expands the bivariate enumerator
///
/// ```text
/// A(x, X) = (1+x)^{2^{t−1}−t−1} / 2^t · [ 2^t (1−x)^{2^{t−1}−t} (1−xX)^t
///           − (1−x)^{2^{t−1}} (1+X)^t + (1+x)^{2^{t−1}} (1+X)^t ]
/// ```
///
/// in which x marks the information weight i and X the weight of the t
/// parity symbols; the returned table is indexed by total weight i + j.
pub fn hamming_cowef(t: u32) -> Result<BlockCowef, AnalysisError> {
    if !(3..=6).contains(&t) {
        return Err(AnalysisError::InvalidParameters(format!("Hamming t={t} outside 3..=6")));
    }
    let t64 = u64::from(t);
    let half = 1u64 << (t - 1);
    let two_t = BigInt::from(1u64 << t);

    let mut first = poly2_mul(&binomial_x(half - t64, -1), &one_minus_x_big_x(t64));
    for c in first.iter_mut().flatten() {
        *c *= &two_t;
    }
    let plus_x = binomial_big_x(t64, 1);
    let mut bracket = first;
    poly2_add(&mut bracket, &poly2_mul(&binomial_x(half, -1), &plus_x), -1);
    poly2_add(&mut bracket, &poly2_mul(&binomial_x(half, 1), &plus_x), 1);
    let full = poly2_mul(&binomial_x(half - t64 - 1, 1), &bracket);

    let n = (1usize << t) - 1;
    let k = n - t as usize;
    let mut rows = vec![vec![BigInt::zero(); n + 1]; k + 1];
    for (i, row) in full.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (quot, rem) = c.div_rem(&two_t);
            if !rem.is_zero() || quot.is_negative() || i > k || j > t as usize {
                return Err(AnalysisError::Internal(format!(
                    "coefficient {c}/2^{t} at x^{i} X^{j}"
                )));
            }
            rows[i][i + j] = quot;
        }
    }
    for (i, row) in rows.iter().enumerate() {
        let sum: BigInt = row.iter().sum();
        if sum != binomial(BigInt::from(k), BigInt::from(i)) {
            return Err(AnalysisError::Internal(format!("row {i} sums to {sum}")));
        }
    }
    Ok(BlockCowef { n, k, q: 2, rows })
}

/// Average C-OWEF of the k × h random-generator ensemble over GF(q) for
/// input weight i: coefficient w is C(k,i)·C(h,w)·p_i^w·(1−p_i)^{h−w} with
/// p_i = (q−1)/q for i ≠ 0 and p_0 = 0.
pub fn lrfc_avg_cowef(k: usize, h: usize, q: u32, i: usize) -> Vec<BigRational> {
    let cki = binomial(BigInt::from(k), BigInt::from(i));
    if i == 0 {
        let mut out = vec![BigRational::zero(); h + 1];
        out[0] = BigRational::from_integer(cki);
        return out;
    }
    let den = BigInt::from(q).pow(h as u32);
    let qm1 = BigInt::from(q - 1);
    (0..=h)
        .map(|w| {
            let num = &cki * binomial(BigInt::from(h), BigInt::from(w)) * Pow::pow(&qm1, w);
            BigRational::new(num, den.clone())
        })
        .collect()
}

/// Ensemble-average weight spectrum A_0..A_l.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSpectrum {
    l: usize,
    k: usize,
    q: u32,
    coeffs: Vec<BigRational>,
}

impl WeightSpectrum {
    pub fn l(&self) -> usize {
        self.l
    }

    /// Dimension of the underlying codes.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn total(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    /// Whether Σ_w A_w = q^k.
    pub fn is_conserved(&self) -> bool {
        self.total() == BigRational::from_integer(BigInt::from(self.q).pow(self.k as u32))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::INFINITY)).collect()
    }

    /// A_w as an exact decimal, or `num/den` when no finite expansion exists.
    pub fn coeff_decimal(&self, w: usize) -> String {
        exact_decimal(&self.coeffs[w])
    }

    /// Two-column CSV `w,A_w` with exact decimal values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("w,A_w\n");
        for (w, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{w},{}\n", exact_decimal(c)));
        }
        out
    }
}

/// Average spectrum of the parallel concatenation of a block code with a
/// k × (l − n) random generator over the same field:
/// 𝒜_i(X) = A_i(X)·𝒜_i^L(X)/C(k,i) and 𝒜_w = Σ_i 𝒜_{i,w}.
pub fn concat_avg_wef(block: &BlockCowef, l: usize) -> Result<WeightSpectrum, AnalysisError> {
    if l < block.n {
        return Err(AnalysisError::InvalidParameters(format!(
            "length l={l} below block length n={}",
            block.n
        )));
    }
    let (k, q) = (block.k, block.q);
    let h = l - block.n;
    let den = BigInt::from(q).pow(h as u32);
    let qm1 = BigInt::from(q - 1);
    // 𝒜_i^L(X)/C(k,i) scaled by q^h; the same polynomial for every i ≠ 0.
    let lrfc: Vec<BigInt> = (0..=h)
        .map(|w| binomial(BigInt::from(h), BigInt::from(w)) * Pow::pow(&qm1, w))
        .collect();
    let mut acc = vec![BigInt::zero(); l + 1];
    for (i, row) in block.rows.iter().enumerate() {
        for (w, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            if i == 0 {
                acc[w] += a * &den;
            } else {
                for (g, b) in lrfc.iter().enumerate() {
                    acc[w + g] += a * b;
                }
            }
        }
    }
    Ok(WeightSpectrum {
        l,
        k,
        q,
        coeffs: acc.into_iter().map(|a| BigRational::new(a, den.clone())).collect(),
    })
}

/// Average spectrum of the k × l random-generator ensemble over GF(q):
/// A_w = (q^k − 1)·C(l,w)·(q−1)^w / q^l plus the zero input at w = 0.
/// A_0 exceeds 1 because a non-zero input meets an all-zero output with
/// probability q^{−l}.
pub fn lrfc_avg_wef(k: usize, l: usize, q: u32) -> WeightSpectrum {
    let den = BigInt::from(q).pow(l as u32);
    let nonzero = BigInt::from(q).pow(k as u32) - 1;
    let qm1 = BigInt::from(q - 1);
    let coeffs = (0..=l)
        .map(|w| {
            let num = &nonzero * binomial(BigInt::from(l), BigInt::from(w)) * Pow::pow(&qm1, w);
            let avg = BigRational::new(num, den.clone());
            if w == 0 {
                avg + BigRational::one()
            } else {
                avg
            }
        })
        .collect();
    WeightSpectrum { l, k, q, coeffs }
}

/// Exact decimal expansion when the denominator has no prime factors
/// other than 2 and 5, `num/den` otherwise.
pub(crate) fn exact_decimal(r: &BigRational) -> String {
    let (num, den) = (r.numer(), r.denom());
    let mut rest = den.clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut a, mut b) = (0u32, 0u32);
    while rest.is_even() {
        rest /= &two;
        a += 1;
    }
    while (&rest % &five).is_zero() {
        rest /= &five;
        b += 1;
    }
    if !rest.is_one() {
        return format!("{num}/{den}");
    }
    let d = a.max(b);
    let scaled = num * BigInt::from(10).pow(d) / den;
    if d == 0 {
        return scaled.to_string();
    }
    let sign = if scaled.is_negative() { "-" } else { "" };
    let digits = format!("{:0>width$}", scaled.abs().to_string(), width = d as usize + 1);
    let (int, frac) = digits.split_at(digits.len() - d as usize);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}
