//! Exact point counts `N_k = #C(F_{p^k})` for smooth superelliptic models.
//!
//! The affine count is `sum_x #{y : y^m = f(x)}`. Each fiber is classified by
//! one power-residue test, either by exponentiation or by a table of `m'`-th
//! power classes indexed by element number (built from a generator). `F_q` is
//! split into contiguous index ranges that are counted independently.

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use thiserror::Error;

use crate::curves::SuperellipticCurve;
use crate::ff::{make_extension, FieldError, FpPoly, FqContext, FqElement, PowerResidueTest};

/// Default cap on `q` for a single `(curve, k)` enumeration.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest `q` for which the residue-class table is built.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("BudgetExceeded: q = {q} exceeds the enumeration budget {budget}")]
    BudgetExceeded { q: BigUint, budget: u64 },
    #[error("WeilViolation: N_{k} = {count} is outside the Weil interval")]
    WeilViolation { k: usize, count: u64 },
    #[error("invalid sequence length {r} for genus {genus}")]
    InvalidLength { r: usize, genus: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// How fibers are classified as `m'`-th powers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidueStrategy {
    /// Table when `q <= table_limit`, exponentiation otherwise.
    #[default]
    Auto,
    Exponentiation,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    pub budget: u64,
    pub strategy: ResidueStrategy,
    pub table_limit: u64,
    /// Spread chunks over the rayon pool.
    pub parallel: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            budget: DEFAULT_BUDGET,
            strategy: ResidueStrategy::Auto,
            table_limit: DEFAULT_TABLE_LIMIT,
            parallel: true,
        }
    }
}

impl CountOptions {
    pub fn with_strategy(mut self, strategy: ResidueStrategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// `N_1, ..., N_r` for one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointCounts {
    pub curve: SuperellipticCurve,
    pub counts: Vec<u64>,
}

enum Classifier {
    Exponent(PowerResidueTest),
    /// `table[index(c)]` is 1 iff `c` is a nonzero `m'`-th power.
    Table {
        classes: u64,
        table: Vec<u8>,
    },
}

impl Classifier {
    fn build(ctx: &FqContext, m: u64, q: u64, opts: &CountOptions) -> Result<Self, FieldError> {
        let test = ctx.residue_test(m)?;
        let use_table = match opts.strategy {
            ResidueStrategy::Exponentiation => false,
            ResidueStrategy::Table => true,
            ResidueStrategy::Auto => q <= opts.table_limit,
        };
        if !use_table || test.classes() == 1 {
            return Ok(Classifier::Exponent(test));
        }
        let g = match ctx.generator() {
            Some(g) => *g,
            None => ctx.find_generator()?,
        };
        let classes = test.classes();
        let mut table = vec![0u8; q as usize];
        let mut cur = ctx.one();
        let mut residue = 0u64;
        for _ in 0..q - 1 {
            if residue == 0 {
                table[ctx.index_of(&cur) as usize] = 1;
            }
            cur = ctx.mul(&cur, &g);
            residue += 1;
            if residue == classes {
                residue = 0;
            }
        }
        Ok(Classifier::Table { classes, table })
    }

    #[inline]
    fn root_count(&self, ctx: &FqContext, c: &FqElement) -> u64 {
        match self {
            Classifier::Exponent(test) => test.root_count(ctx, c),
            Classifier::Table { classes, table } => {
                if ctx.is_zero(c) {
                    1
                } else {
                    table[ctx.index_of(c) as usize] as u64 * classes
                }
            }
        }
    }
}

fn field_size(ctx: &FqContext, opts: &CountOptions) -> Result<u64, CountError> {
    match ctx.order_u64() {
        Some(q) if q <= opts.budget => Ok(q),
        _ => Err(CountError::BudgetExceeded {
            q: ctx.order().clone(),
            budget: opts.budget,
        }),
    }
}

fn sum_chunks<F>(q: u64, parallel: bool, chunk_count: F) -> u64
where
    F: Fn(u64, u64) -> u64 + Sync,
{
    let n_chunks = q.div_ceil(CHUNK);
    let run = |i: u64| {
        let start = i * CHUNK;
        chunk_count(start, (start + CHUNK).min(q))
    };
    if parallel && n_chunks > 1 {
        (0..n_chunks).into_par_iter().map(run).sum()
    } else {
        (0..n_chunks).map(run).sum()
    }
}

/// `#{(x, y) in F_q^2 : y^m = rhs(x)}` with default options.
pub fn count_affine(m: u32, rhs: &FpPoly, ctx: &FqContext) -> Result<u64, CountError> {
    count_affine_with(m, rhs, ctx, &CountOptions::default())
}

pub fn count_affine_with(
    m: u32,
    rhs: &FpPoly,
    ctx: &FqContext,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    count_affine_filtered(m, rhs, None, ctx, opts)
}

/// Affine count restricted to the `x` with `avoid(x) != 0`.
pub fn count_affine_avoiding(
    m: u32,
    rhs: &FpPoly,
    avoid: &FpPoly,
    ctx: &FqContext,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    count_affine_filtered(m, rhs, Some(avoid), ctx, opts)
}

fn count_affine_filtered(
    m: u32,
    rhs: &FpPoly,
    avoid: Option<&FpPoly>,
    ctx: &FqContext,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    let q = field_size(ctx, opts)?;
    let classifier = Classifier::build(ctx, m as u64, q, opts)?;
    Ok(sum_chunks(q, opts.parallel, |start, end| {
        let mut x = ctx.from_index(start);
        let mut total = 0u64;
        for _ in start..end {
            let keep = avoid.is_none_or(|a| !ctx.is_zero(&ctx.eval_poly(a, &x)));
            if keep {
                total += classifier.root_count(ctx, &ctx.eval_poly(rhs, &x));
            }
            ctx.increment(&mut x);
        }
        total
    }))
}

/// Oracle: counts pairs `(x, y)` directly, bucketing `y^m` by element index so
/// the `q^2` pair loop collapses to two passes. Does not use power-residue tests.
pub fn count_affine_brute_force(m: u32, rhs: &FpPoly, ctx: &FqContext) -> u64 {
    let q = ctx.order_u64().expect("oracle needs a small field");
    let mut fiber = vec![0u64; q as usize];
    for y in ctx.elements() {
        fiber[ctx.index_of(&ctx.pow_u64(&y, m as u64)) as usize] += 1;
    }
    ctx.elements()
        .map(|x| fiber[ctx.index_of(&ctx.eval_poly(rhs, &x)) as usize])
        .sum()
}

/// Number of points at infinity of the smooth model over `ctx`.
pub fn infinity_count(curve: &SuperellipticCurve, ctx: &FqContext) -> Result<u64, CountError> {
    if curve.delta() == 1 {
        Ok(1)
    } else {
        let lc = ctx.from_base(curve.polynomial().leading_coefficient());
        Ok(ctx.mth_root_count(&lc, curve.exponent() as u64)?)
    }
}

/// `N_k` over a prebuilt context.
pub fn count_points_in(
    curve: &SuperellipticCurve,
    ctx: &FqContext,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    let affine = count_affine_with(curve.exponent(), curve.polynomial(), ctx, opts)?;
    Ok(affine + infinity_count(curve, ctx)?)
}

/// `N_k = #C(F_{p^k})` for the smooth model.
pub fn count_points(
    curve: &SuperellipticCurve,
    k: usize,
    opts: &CountOptions,
) -> Result<u64, CountError> {
    let ctx = make_extension(curve.prime(), k)?;
    field_size(&ctx, opts)?;
    count_points_in(curve, &ctx, opts)
}

/// `(N_k - q - 1)^2 <= 4 g^2 q`.
pub fn within_weil_bound(count: u64, q: &BigUint, genus: u32) -> bool {
    let q = BigInt::from(q.clone());
    let dev = BigInt::from(count) - &q - 1;
    let g = BigInt::from(genus);
    &dev * &dev <= BigInt::from(4) * &g * &g * q
}

/// `(N_1, ..., N_r)`, each checked against the Weil bound.
pub fn count_sequence(
    curve: &SuperellipticCurve,
    r: usize,
    opts: &CountOptions,
) -> Result<PointCounts, CountError> {
    let genus = curve.genus();
    if r == 0 || r > (2 * genus as usize).max(1) {
        return Err(CountError::InvalidLength { r, genus });
    }
    // Fail fast before spending time on the small extensions.
    let top = BigUint::from(curve.prime().get()).pow(r as u32);
    if top > BigUint::from(opts.budget) {
        return Err(CountError::BudgetExceeded {
            q: top,
            budget: opts.budget,
        });
    }
    let mut counts = Vec::with_capacity(r);
    for k in 1..=r {
        let ctx = make_extension(curve.prime(), k)?;
        let n = count_points_in(curve, &ctx, opts)?;
        if !within_weil_bound(n, ctx.order(), genus) {
            return Err(CountError::WeilViolation { k, count: n });
        }
        counts.push(n);
    }
    Ok(PointCounts {
        curve: curve.clone(),
        counts,
    })
}
