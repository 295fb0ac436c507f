//! Code construction and rateless encoding.
//!
//! A source block u ∈ GF(q)^k is encoded by an (n, k) block code with
//! generator G′ and, in parallel, by a linear random fountain code (LRFC)
//! whose generator columns are drawn uniformly over GF(q). Symbol indices
//! are 1-based: symbols 1..=n are the block codeword u·G′ and every symbol
//! j > n is u·g_j for a random column g_j.

use std::collections::BTreeMap;
use std::fmt;

use rand::RngCore;
use thiserror::Error;

use crate::galois::{build_field, FieldCtx, GaloisError, Gf};
use crate::kv::{parse_kv, KvError};
use crate::linalg::MatrixGF;
use crate::rng::StreamKey;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("GRS length n={n} exceeds q-1={max} available non-zero evaluation points")]
    CapacityExceeded { n: usize, max: u32 },
    #[error("GRS evaluation points must be distinct and non-zero")]
    InvalidNodes,
    #[error("invalid code parameters: {0}")]
    InvalidParameters(String),
    #[error("source block has {got} symbols, code expects k={expected}")]
    SourceLength { expected: usize, got: usize },
    #[error(transparent)]
    Galois(#[from] GaloisError),
    #[error(transparent)]
    Kv(#[from] KvError),
}

/// Block code placed in front of the LRFC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// Generalized Reed-Solomon with transposed generator in Vandermonde form.
    Grs { betas: Vec<Gf> },
    /// Binary (k+1, k) single parity-check code.
    Spc,
    /// Binary (2^t − 1, 2^t − 1 − t) Hamming code, systematic.
    Hamming { t: u32 },
    /// No block code: a pure LRFC from symbol 1 on.
    None,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Grs { .. } => "grs",
            Family::Spc => "spc",
            Family::Hamming { .. } => "hamming",
            Family::None => "none",
        }
    }
}

/// Description of the concatenated code.
#[derive(Clone, PartialEq, Eq)]
pub struct CodeSpec {
    field: &'static FieldCtx,
    k: usize,
    n: usize,
    family: Family,
    generator: MatrixGF,
}

impl fmt::Debug for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CodeSpec")
            .field("q", &self.field.order())
            .field("n", &self.n)
            .field("k", &self.k)
            .field("family", &self.family)
            .finish()
    }
}

impl CodeSpec {
    /// GRS code with the default evaluation points β_i = α^{i−1}.
    pub fn grs(field: &'static FieldCtx, n: usize, k: usize) -> Result<Self, CodeError> {
        let max = field.order() - 1;
        if n > max as usize {
            return Err(CodeError::CapacityExceeded { n, max });
        }
        let betas = (0..n as u64).map(|i| field.alpha_pow(i)).collect();
        Self::grs_with_nodes(field, k, betas)
    }

    pub fn grs_with_nodes(
        field: &'static FieldCtx,
        k: usize,
        betas: Vec<Gf>,
    ) -> Result<Self, CodeError> {
        let n = betas.len();
        let max = field.order() - 1;
        if n > max as usize {
            return Err(CodeError::CapacityExceeded { n, max });
        }
        check_dims(n, k)?;
        let mut seen = vec![false; field.order() as usize];
        for b in &betas {
            if b.is_zero() || u32::from(b.0) >= field.order() || std::mem::replace(&mut seen[b.0 as usize], true) {
                return Err(CodeError::InvalidNodes);
            }
        }
        let generator = MatrixGF::from_fn(field, k, n, |r, c| field.pow(betas[c], r as u64));
        Ok(CodeSpec {
            field,
            k,
            n,
            family: Family::Grs { betas },
            generator,
        })
    }

    /// Binary (k+1, k) single parity-check code.
    pub fn spc(k: usize) -> Result<Self, CodeError> {
        if k == 0 {
            return Err(CodeError::InvalidParameters("SPC needs k >= 1".into()));
        }
        Ok(CodeSpec {
            field: build_field(1)?,
            k,
            n: k + 1,
            family: Family::Spc,
            generator: spc_generator(k),
        })
    }

    /// Binary Hamming code of redundancy t ∈ 3..=6.
    pub fn hamming(t: u32) -> Result<Self, CodeError> {
        if !(3..=6).contains(&t) {
            return Err(CodeError::InvalidParameters(format!(
                "Hamming parameter t={t} outside 3..=6"
            )));
        }
        let n = (1usize << t) - 1;
        Ok(CodeSpec {
            field: build_field(1)?,
            k: n - t as usize,
            n,
            family: Family::Hamming { t },
            generator: hamming_generator(t)?,
        })
    }

    /// Pure LRFC with k source symbols.
    pub fn lrfc(field: &'static FieldCtx, k: usize) -> Result<Self, CodeError> {
        if k == 0 {
            return Err(CodeError::InvalidParameters("k must be >= 1".into()));
        }
        Ok(CodeSpec {
            field,
            k,
            n: 0,
            family: Family::None,
            generator: MatrixGF::zeros(field, k, 0),
        })
    }

    /// Builds and validates a spec from its parts, as read from a config.
    pub fn from_parts(
        field: &'static FieldCtx,
        family: &str,
        n: Option<usize>,
        k: Option<usize>,
        t: Option<u32>,
        betas: Option<Vec<Gf>>,
    ) -> Result<Self, CodeError> {
        let need = |v: Option<usize>, name: &str| {
            v.ok_or_else(|| CodeError::InvalidParameters(format!("family {family} needs {name}")))
        };
        let binary = |name: &str| {
            if field.order() == 2 {
                Ok(())
            } else {
                Err(CodeError::InvalidParameters(format!(
                    "{name} codes are binary, got q={}",
                    field.order()
                )))
            }
        };
        let spec = match family {
            "grs" => match betas {
                Some(b) => Self::grs_with_nodes(field, need(k, "k")?, b)?,
                None => Self::grs(field, need(n, "n")?, need(k, "k")?)?,
            },
            "spc" => {
                binary("SPC")?;
                let spec = Self::spc(need(k, "k")?)?;
                if n.is_some_and(|n| n != spec.n) {
                    return Err(CodeError::InvalidParameters("SPC requires n = k + 1".into()));
                }
                spec
            }
            "hamming" => {
                binary("Hamming")?;
                let t = t.ok_or_else(|| CodeError::InvalidParameters("hamming needs t".into()))?;
                let spec = Self::hamming(t)?;
                if n.is_some_and(|n| n != spec.n) || k.is_some_and(|k| k != spec.k) {
                    return Err(CodeError::InvalidParameters(format!(
                        "Hamming t={t} fixes (n, k) = ({}, {})",
                        spec.n, spec.k
                    )));
                }
                spec
            }
            "none" | "lrfc" => Self::lrfc(field, need(k, "k")?)?,
            other => {
                return Err(CodeError::InvalidParameters(format!("unknown family {other:?}")))
            }
        };
        Ok(spec)
    }

    pub fn field(&self) -> &'static FieldCtx {
        self.field
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Block-code length; 0 for a pure LRFC.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Whether any k block symbols determine the source block.
    pub fn is_mds(&self) -> bool {
        matches!(self.family, Family::Grs { .. } | Family::Spc)
    }

    pub fn betas(&self) -> Option<&[Gf]> {
        match &self.family {
            Family::Grs { betas } => Some(betas),
            _ => None,
        }
    }

    /// Block generator G′ (k × n).
    pub fn generator(&self) -> &MatrixGF {
        &self.generator
    }

    /// Column of G for 1-based symbol index `j`.
    pub fn column(&self, j: usize, lrfc_seed: u64) -> Vec<Gf> {
        assert!(j >= 1, "symbol indices are 1-based");
        if j <= self.n {
            self.generator.column(j - 1)
        } else {
            lrfc_column(self.field, self.k, &StreamKey::new(lrfc_seed), j)
        }
    }

    /// Codeword symbol j for source block `u`.
    pub fn symbol(&self, u: &[Gf], j: usize, lrfc_seed: u64) -> Gf {
        self.field.dot(u, &self.column(j, lrfc_seed))
    }

    /// Flat `key=value` form (`field=gf16`, `family=grs`, `n=15`, `k=10`, …).
    pub fn to_kv(&self) -> String {
        let mut out = format!(
            "field=gf{}\nfamily={}\nn={}\nk={}\n",
            self.field.order(),
            self.family.name(),
            self.n,
            self.k
        );
        match &self.family {
            Family::Grs { betas } => {
                let list: Vec<String> = betas.iter().map(|b| b.0.to_string()).collect();
                out.push_str(&format!("betas={}\n", list.join(",")));
            }
            Family::Hamming { t } => out.push_str(&format!("t={t}\n")),
            Family::Spc | Family::None => {}
        }
        out
    }

    /// Inverse of [`CodeSpec::to_kv`]. Keys other than the code's own
    /// (`field`, `family`, `n`, `k`, `t`, `betas`) are returned untouched.
    pub fn from_kv(text: &str) -> Result<(Self, BTreeMap<String, String>), CodeError> {
        let mut map = parse_kv(text)?;
        let field_name = map
            .remove("field")
            .ok_or_else(|| CodeError::InvalidParameters("missing key field".into()))?;
        let field = parse_field(&field_name)?;
        let family = map
            .remove("family")
            .ok_or_else(|| CodeError::InvalidParameters("missing key family".into()))?;
        let num = |v: Option<String>, name: &str| -> Result<Option<usize>, CodeError> {
            v.map(|s| {
                s.parse()
                    .map_err(|_| CodeError::InvalidParameters(format!("{name}={s:?} is not an integer")))
            })
            .transpose()
        };
        let n = num(map.remove("n"), "n")?;
        let k = num(map.remove("k"), "k")?;
        let t = num(map.remove("t"), "t")?.map(|t| t as u32);
        let betas = map
            .remove("betas")
            .map(|s| parse_symbols(field, &s))
            .transpose()?;
        let spec = Self::from_parts(field, &family, n, k, t, betas)?;
        if let Some(n) = n {
            if n != spec.n {
                return Err(CodeError::InvalidParameters(format!(
                    "n={n} disagrees with the code length {}",
                    spec.n
                )));
            }
        }
        Ok((spec, map))
    }
}

fn check_dims(n: usize, k: usize) -> Result<(), CodeError> {
    if k == 0 || k > n {
        return Err(CodeError::InvalidParameters(format!(
            "need 1 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// Parses `gf16`, `GF(16)` or a bare order such as `16`.
pub fn parse_field(name: &str) -> Result<&'static FieldCtx, CodeError> {
    let digits: String = name.chars().filter(|c| c.is_ascii_digit()).collect();
    let q: u32 = digits
        .parse()
        .map_err(|_| CodeError::InvalidParameters(format!("cannot read field {name:?}")))?;
    Ok(FieldCtx::for_order(q)?)
}

/// Parses a comma-separated list of field elements.
pub fn parse_symbols(field: &FieldCtx, text: &str) -> Result<Vec<Gf>, CodeError> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let v: u32 = s
                .trim()
                .parse()
                .map_err(|_| CodeError::InvalidParameters(format!("{s:?} is not a field element")))?;
            Ok(field.element(v)?)
        })
        .collect()
}

/// G′ of a GRS code: G′ᵀ has rows (1, β_i, …, β_i^{k−1}).
pub fn grs_generator(spec: &CodeSpec) -> Result<MatrixGF, CodeError> {
    match &spec.family {
        Family::Grs { .. } => Ok(spec.generator.clone()),
        other => Err(CodeError::InvalidParameters(format!(
            "grs_generator on a {} code",
            other.name()
        ))),
    }
}

/// Systematic SPC generator [I_k | 1].
pub fn spc_generator(k: usize) -> MatrixGF {
    let field = build_field(1).expect("GF(2) is supported");
    MatrixGF::from_fn(field, k, k + 1, |r, c| if c == k || c == r { Gf::ONE } else { Gf::ZERO })
}

/// Systematic generator [I_k | P] of the (2^t − 1, 2^t − 1 − t) Hamming code.
///
/// The parity-check matrix has all non-zero t-bit patterns as columns in
/// ascending order; information positions are the patterns that are not a
/// power of two (ascending) and parity positions are 1, 2, 4, … so data
/// symbol r contributes its pattern's bits to the t parity symbols.
pub fn hamming_generator(t: u32) -> Result<MatrixGF, CodeError> {
    if !(2..=8).contains(&t) {
        return Err(CodeError::InvalidParameters(format!("Hamming t={t} unsupported")));
    }
    let field = build_field(1)?;
    let n = (1usize << t) - 1;
    let k = n - t as usize;
    let patterns: Vec<usize> = (1..=n).filter(|v| !v.is_power_of_two()).collect();
    Ok(MatrixGF::from_fn(field, k, n, |r, c| {
        let bit = if c < k {
            c == r
        } else {
            (patterns[r] >> (c - k)) & 1 == 1
        };
        Gf(u8::from(bit))
    }))
}

/// The LRFC column for absolute (1-based) symbol index `j`.
pub(crate) fn lrfc_column(field: &FieldCtx, k: usize, key: &StreamKey, j: usize) -> Vec<Gf> {
    let mut rng = key.stream(j as u64);
    let mask = field.mask();
    let mut bytes = vec![0u8; k];
    rng.fill_bytes(&mut bytes);
    bytes.into_iter().map(|b| Gf(b & mask)).collect()
}

/// `count` LRFC generator columns starting at absolute symbol index
/// `first_index`, as a k × count matrix. Entries are i.i.d. uniform over
/// the whole field (zero included), and column j depends on `(seed, j)` only.
pub fn lrfc_columns(
    field: &'static FieldCtx,
    k: usize,
    count: usize,
    seed: u64,
    first_index: usize,
) -> MatrixGF {
    let key = StreamKey::new(seed);
    let mut out = MatrixGF::zeros(field, k, count);
    for c in 0..count {
        for (r, v) in lrfc_column(field, k, &key, first_index + c).into_iter().enumerate() {
            out.set(r, c, v);
        }
    }
    out
}

/// The k source symbols u_1..u_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceBlock(Vec<Gf>);

impl SourceBlock {
    pub fn new(spec: &CodeSpec, values: Vec<Gf>) -> Result<Self, CodeError> {
        if values.len() != spec.k {
            return Err(CodeError::SourceLength {
                expected: spec.k,
                got: values.len(),
            });
        }
        for v in &values {
            spec.field.element(u32::from(v.0))?;
        }
        Ok(SourceBlock(values))
    }

    pub fn symbols(&self) -> &[Gf] {
        &self.0
    }
}

/// Unbounded output of the concatenated encoder.
#[derive(Debug, Clone)]
pub struct EncodedStream {
    spec: CodeSpec,
    source: Vec<Gf>,
    prefix: Vec<Gf>,
    key: StreamKey,
    seed: u64,
    emitted: usize,
}

impl EncodedStream {
    pub fn spec(&self) -> &CodeSpec {
        &self.spec
    }

    /// The block codeword c′ = u·G′.
    pub fn prefix(&self) -> &[Gf] {
        &self.prefix
    }

    /// Seed keying the LRFC columns.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of symbols produced so far (l).
    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Symbol `j` (1-based), independent of the stream position.
    pub fn symbol(&self, j: usize) -> Gf {
        assert!(j >= 1, "symbol indices are 1-based");
        if j <= self.spec.n {
            self.prefix[j - 1]
        } else {
            let col = lrfc_column(self.spec.field, self.spec.k, &self.key, j);
            self.spec.field.dot(&self.source, &col)
        }
    }

    pub fn next_symbol(&mut self) -> Gf {
        self.emitted += 1;
        self.symbol(self.emitted)
    }
}

impl Iterator for EncodedStream {
    type Item = Gf;

    fn next(&mut self) -> Option<Gf> {
        Some(self.next_symbol())
    }
}

/// Starts the rateless encoder for `u`; LRFC columns are keyed by `seed`.
pub fn encode_stream(u: &SourceBlock, spec: CodeSpec, seed: u64) -> EncodedStream {
    let prefix = spec
        .generator
        .vec_mul(u.symbols())
        .expect("source block length checked at construction");
    EncodedStream {
        source: u.symbols().to_vec(),
        prefix,
        key: StreamKey::new(seed),
        seed,
        emitted: 0,
        spec,
    }
}
