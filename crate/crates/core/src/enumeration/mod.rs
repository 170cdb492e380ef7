//! Exact CN and PCN counts through the finest agreeable decomposition.
//!
//! A completely normal element `w` is projected onto every component
//! `C_{k,t}`; the complete generators of a component are the elements
//! `h(sigma) u` passing the order test at each level, and `CN` is the product
//! of the per-component counts. `PCN` recombines every tuple of generators
//! and tests the sum for primitivity: the largest component is streamed in
//! chunks while the others are held in memory.

mod checkpoint;
mod component;
mod oracle;
mod walker;

use std::fmt;
use std::path::PathBuf;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use checkpoint::ChunkRecord;
pub use component::{
    component_levels, in_component, is_complete_generator, level_target, project_generator, unit_count_of_component,
    ComponentSpace,
};
pub use oracle::{brute_force_oracle, model_generator, primitive_model_field, PrimitiveTable, Quintuple, DEFAULT_ORACLE_CEILING};
pub use walker::{ElemRef, Packed, Walker};

use crate::error::{PcnError, Result};
use crate::gf::{FieldCtx, FieldElement, FiniteField};
use crate::search::PrimitivityTester;
use crate::structure::{finest_agreeable_decomposition, CyclotomicPair, ExtensionModel, PrimePowerPair};

/// Components with at most this many complete generators are materialized.
pub const DEFAULT_BIG_THRESHOLD: u64 = 1 << 16;
/// Largest field for which primitivity is looked up in a bitset by default.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;
/// Hard cap on the bitset size (`2^32` bits is 512 MiB).
pub const MAX_TABLE_LIMIT: u64 = 1 << 32;
/// Indices of the streamed component per chunk.
pub const DEFAULT_CHUNK_SIZE: u64 = 1 << 18;
/// Largest precomputed table of sums over the materialized components.
pub const SUM_TABLE_LIMIT: usize = 1 << 22;
/// Counting by inclusion and exclusion is used up to this many checks.
const INCLUSION_EXCLUSION_CHECKS: usize = 16;
const CN_SEARCH_ATTEMPTS: usize = 1 << 20;

/// Header of the enumeration CSV.
pub const ENUMERATION_CSV_HEADER: &str = "q,p,r,n,CN,PCN,gens";

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Test only the levels in `D*` instead of every divisor of the character.
    pub relaxed: bool,
    pub big_threshold: u64,
    pub table_limit: u64,
    pub chunk_size: u64,
    /// JSON-lines file recording finished chunks of a PCN run.
    pub checkpoint: Option<PathBuf>,
    /// Seed of the search for the initial completely normal element.
    pub seed: u64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            relaxed: true,
            big_threshold: DEFAULT_BIG_THRESHOLD,
            table_limit: DEFAULT_TABLE_LIMIT,
            chunk_size: DEFAULT_CHUNK_SIZE,
            checkpoint: None,
            seed: 0,
        }
    }
}

/// The complete generators of one component.
#[derive(Clone, Debug)]
pub struct ComponentGenSet {
    pub component: CyclotomicPair,
    /// The projection `u` of the completely normal element.
    pub base: FieldElement,
    pub count: BigUint,
    /// All complete generators, in index order, for small components.
    pub materialized: Option<Vec<FieldElement>>,
    pub regular: bool,
    /// `(k t' pi)` with a `*` for regular components.
    pub label: String,
}

/// One entry of the `gens` column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenEntry {
    pub component: CyclotomicPair,
    pub label: String,
    pub count: BigUint,
    pub regular: bool,
}

impl fmt::Display for GenEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.label, self.count)
    }
}

impl From<&ComponentGenSet> for GenEntry {
    fn from(s: &ComponentGenSet) -> Self {
        Self { component: s.component, label: s.label.clone(), count: s.count.clone(), regular: s.regular }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationRecord {
    pub pair: PrimePowerPair,
    pub cn: BigUint,
    pub pcn: Option<BigUint>,
    pub gens: Vec<GenEntry>,
}

impl EnumerationRecord {
    /// `q,p,r,n,CN,PCN,gens` with the entries of `gens` joined by `"; "`.
    pub fn csv_row(&self) -> String {
        let pr = &self.pair;
        let pcn = self.pcn.as_ref().map(ToString::to_string).unwrap_or_default();
        let gens: Vec<String> = self.gens.iter().map(ToString::to_string).collect();
        format!("{},{},{},{},{},{},{}", pr.q(), pr.p, pr.e, pr.n, self.cn, pcn, gens.join("; "))
    }
}

/// A completely normal element found by seeded random sampling.
pub fn find_cn_element(model: &ExtensionModel, seed: u64) -> Result<FieldElement> {
    let field = model.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..CN_SEARCH_ATTEMPTS {
        let w = field.random(&mut rng);
        if !field.is_zero(&w) && model.is_completely_normal(&w)? {
            return Ok(w);
        }
    }
    Err(PcnError::Internal("no completely normal element found".into()))
}

fn split(total: u64, chunk: u64) -> Vec<std::ops::Range<u64>> {
    let chunk = chunk.max(1);
    (0..total.div_ceil(chunk)).map(|i| i * chunk..((i + 1) * chunk).min(total)).collect()
}

fn walker_feasible(space: &ComponentSpace) -> bool {
    u32::try_from(space.dim()).ok().and_then(|d| space.p.checked_pow(d)).is_some_and(|t| t < 1 << 62)
}

/// Number of complete generators of a component space.
fn count_space(space: &ComponentSpace, ctx: &FieldCtx) -> Result<BigUint> {
    if space.checks.len() <= INCLUSION_EXCLUSION_CHECKS {
        return space
            .count_by_inclusion_exclusion()?
            .to_biguint()
            .ok_or_else(|| PcnError::Internal("negative generator count".into()));
    }
    let walker = Walker::new(space, ctx, false)?;
    let total: u64 = split(walker.total(), DEFAULT_CHUNK_SIZE).into_par_iter().map(|r| walker.count(r)).sum();
    Ok(BigUint::from(total))
}

fn materialize(space: &ComponentSpace, ctx: &FieldCtx) -> Result<Vec<FieldElement>> {
    let walker = Walker::new(space, ctx, true)?;
    let parts: Vec<Vec<FieldElement>> = split(walker.total(), DEFAULT_CHUNK_SIZE)
        .into_par_iter()
        .map(|r| {
            let mut out = Vec::new();
            walker.visit(r, |v| out.push(v.to_element(ctx)));
            out
        })
        .collect();
    Ok(parts.concat())
}

fn gen_set(model: &ExtensionModel, space: &ComponentSpace, count: BigUint, materialized: Option<Vec<FieldElement>>) -> ComponentGenSet {
    let pair = model.pair();
    ComponentGenSet {
        component: space.component,
        base: space.base.clone(),
        count,
        materialized,
        regular: space.component.is_regular(pair),
        label: space.component.label(pair),
    }
}

/// Counts the complete generators of `c` reachable from the completely
/// normal element `w`, materializing them when there are at most
/// `opts.big_threshold` of them.
pub fn count_component_generators(
    model: &ExtensionModel,
    w: &FieldElement,
    c: CyclotomicPair,
    opts: &EnumerationOptions,
) -> Result<ComponentGenSet> {
    let space = ComponentSpace::build(model, w, c, opts.relaxed)?;
    let ctx = model.field();
    let count = count_space(&space, ctx)?;
    let materialized = if count <= BigUint::from(opts.big_threshold) && walker_feasible(&space) {
        Some(materialize(&space, ctx)?)
    } else {
        None
    };
    Ok(gen_set(model, &space, count, materialized))
}

struct Setup {
    model: ExtensionModel,
    spaces: Vec<ComponentSpace>,
}

fn setup(pair: &PrimePowerPair, opts: &EnumerationOptions) -> Result<Setup> {
    let ctx = primitive_model_field(pair.p, pair.absolute_degree())?;
    let model = ExtensionModel::new(*pair, ctx)?;
    let w = find_cn_element(&model, opts.seed)?;
    let spaces = finest_agreeable_decomposition(pair)
        .parts
        .into_iter()
        .map(|c| ComponentSpace::build(&model, &w, c, opts.relaxed))
        .collect::<Result<Vec<_>>>()?;
    Ok(Setup { model, spaces })
}

/// `CN_n(q)` as the product of the per-component generator counts.
pub fn count_cn(pair: &PrimePowerPair, opts: &EnumerationOptions) -> Result<EnumerationRecord> {
    let Setup { model, spaces } = setup(pair, opts)?;
    let mut gens = Vec::with_capacity(spaces.len());
    for space in &spaces {
        let count = count_space(space, model.field())?;
        gens.push(GenEntry::from(&gen_set(&model, space, count, None)));
    }
    let cn = gens.iter().map(|g| g.count.clone()).product();
    Ok(EnumerationRecord { pair: *pair, cn, pcn: None, gens })
}

enum Primitivity {
    Table(PrimitiveTable),
    Tester(PrimitivityTester),
}

impl Primitivity {
    fn new(ctx: &FieldCtx, limit: u64) -> Result<Self> {
        let limit = limit.min(MAX_TABLE_LIMIT);
        match ctx.order_u64() {
            Some(q) if q <= limit => Ok(Self::Table(PrimitiveTable::build(ctx)?)),
            _ => Ok(Self::Tester(PrimitivityTester::for_field(ctx.p(), ctx.m())?)),
        }
    }

    fn test(&self, ctx: &FieldCtx, v: &Packed) -> Result<bool> {
        match self {
            Self::Table(t) => Ok(t.contains(v.index(ctx.p()))),
            Self::Tester(t) => t.is_primitive(ctx, &v.as_ref().to_element(ctx)),
        }
    }
}

/// Sums over the materialized components: a precomputed table of partial
/// sums plus the sets iterated on top of it.
struct SmallSums {
    table: Vec<Packed>,
    outer: Vec<Vec<Packed>>,
}

impl SmallSums {
    fn new(p: u64, zero: Packed, mut sets: Vec<Vec<Packed>>) -> Self {
        sets.sort_by_key(Vec::len);
        let mut table = vec![zero];
        let mut rest = sets.into_iter().peekable();
        while let Some(next) = rest.next_if(|s| table.len().saturating_mul(s.len()) <= SUM_TABLE_LIMIT) {
            let mut grown = Vec::with_capacity(table.len() * next.len());
            for a in &table {
                for b in &next {
                    let mut s = a.clone();
                    s.add_assign(b.as_ref(), p);
                    grown.push(s);
                }
            }
            table = grown;
        }
        Self { table, outer: rest.collect() }
    }

    /// Calls `f(v + s)` for every sum `s` of one generator per small component.
    fn for_each(&self, v: ElemRef<'_>, p: u64, f: &mut impl FnMut(&Packed) -> Result<()>) -> Result<()> {
        let mut base = match v {
            ElemRef::Bits(b) => Packed::Bits(b.to_vec()),
            ElemRef::Digits(d) => Packed::Digits(d.to_vec()),
        };
        self.outer_level(0, &mut base, p, f)
    }

    fn outer_level(&self, level: usize, base: &mut Packed, p: u64, f: &mut impl FnMut(&Packed) -> Result<()>) -> Result<()> {
        if level == self.outer.len() {
            let mut tmp = base.clone();
            for s in &self.table {
                tmp.set_sum(base.as_ref(), s.as_ref(), p);
                f(&tmp)?;
            }
            return Ok(());
        }
        for g in &self.outer[level] {
            let mut next = base.clone();
            next.add_assign(g.as_ref(), p);
            self.outer_level(level + 1, &mut next, p, f)?;
        }
        Ok(())
    }

    fn len(&self) -> u64 {
        self.outer.iter().fold(self.table.len() as u64, |acc, s| acc * s.len() as u64)
    }
}

/// `CN_n(q)` and `PCN_n(q)`. Every tuple of complete generators is summed and
/// tested for primitivity; the number of tuples must equal the product of
/// the component counts.
pub fn count_pcn(pair: &PrimePowerPair, opts: &EnumerationOptions) -> Result<EnumerationRecord> {
    let Setup { model, spaces } = setup(pair, opts)?;
    let ctx = model.field().clone();
    let p = pair.p;
    if let Some(s) = spaces.iter().find(|s| !walker_feasible(s)) {
        return Err(PcnError::InvalidArgument(format!("component {} is too large to enumerate", s.component)));
    }
    let big = (0..spaces.len()).max_by_key(|&i| (spaces[i].dim(), std::cmp::Reverse(i))).expect("at least one component");
    let mut gens = Vec::with_capacity(spaces.len());
    let mut small_sets = Vec::new();
    for (i, space) in spaces.iter().enumerate() {
        if i == big {
            let count = count_space(space, &ctx)?;
            gens.push(GenEntry::from(&gen_set(&model, space, count, None)));
            continue;
        }
        let elems = materialize(space, &ctx)?;
        gens.push(GenEntry::from(&gen_set(&model, space, BigUint::from(elems.len()), None)));
        small_sets.push(elems.iter().map(|e| Packed::from_element(p, e)).collect::<Vec<_>>());
    }
    let cn: BigUint = gens.iter().map(|g| g.count.clone()).product();

    let zero = Packed::from_element(p, &ctx.zero());
    let sums = SmallSums::new(p, zero, small_sets);
    let prim = Primitivity::new(&ctx, opts.table_limit)?;
    let walker = Walker::new(&spaces[big], &ctx, true)?;
    let ranges = split(walker.total(), opts.chunk_size);

    let key = format!(
        "{}/{}/{}/relaxed={}/seed={}/chunk={}/f={}/big={}",
        pair.p,
        pair.e,
        pair.n,
        opts.relaxed,
        opts.seed,
        opts.chunk_size,
        ctx.modulus(),
        spaces[big].component
    );
    let (log, done) = match &opts.checkpoint {
        Some(path) => {
            let (log, done) = checkpoint::Checkpoint::open(path, key)?;
            (Some(log), done)
        }
        None => (None, Default::default()),
    };

    let fresh: Vec<ChunkRecord> = ranges
        .par_iter()
        .enumerate()
        .filter(|(i, _)| !done.contains_key(&(*i as u64)))
        .map(|(i, r)| -> Result<ChunkRecord> {
            let mut pcn = 0u64;
            let mut err = None;
            let big_count = walker.visit(r.clone(), |v| {
                if err.is_some() {
                    return;
                }
                let res = sums.for_each(v, p, &mut |s| {
                    pcn += prim.test(&ctx, s)? as u64;
                    Ok(())
                });
                if let Err(e) = res {
                    err = Some(e);
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            let rec = ChunkRecord {
                key: log.as_ref().map_or_else(String::new, |l| l.key().to_string()),
                chunk: i as u64,
                start: r.start,
                end: r.end,
                big: big_count,
                pcn,
            };
            if let Some(l) = &log {
                l.append(&rec)?;
            }
            Ok(rec)
        })
        .collect::<Result<Vec<_>>>()?;

    let (mut big_total, mut pcn_total) = (0u128, 0u128);
    for rec in done.values().chain(&fresh) {
        big_total += rec.big as u128;
        pcn_total += rec.pcn as u128;
    }
    let tuples = BigUint::from(big_total) * BigUint::from(sums.len());
    if tuples != cn {
        return Err(PcnError::Internal(format!("enumerated {tuples} tuples but the product of counts is {cn}")));
    }
    Ok(EnumerationRecord { pair: *pair, cn, pcn: Some(BigUint::from(pcn_total)), gens })
}

/// Outcome of comparing a CN count with `(q-1)^{n'} q^{(p^a - 1) n'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub bound: BigUint,
    pub holds: bool,
    pub equality: bool,
    /// Whether `n'` divides `q - 1`, the predicted equality case.
    pub equality_expected: bool,
}

impl ConjectureCheck {
    /// The bound holds and equality occurs exactly in the predicted case.
    pub fn consistent(&self) -> bool {
        self.holds && self.equality == self.equality_expected
    }
}

pub fn conjecture_check(record: &EnumerationRecord) -> ConjectureCheck {
    let pr = &record.pair;
    let q = pr.q();
    let n1 = pr.n_prime();
    let bound = num_traits::pow(BigUint::from(q - 1), n1 as usize)
        * num_traits::pow(BigUint::from(q), ((pr.pi() - 1) * n1) as usize);
    ConjectureCheck {
        holds: record.cn >= bound,
        equality: record.cn == bound,
        equality_expected: (q - 1).is_multiple_of(n1),
        bound,
    }
}

/// `CN` as a `u64`, for small records.
pub fn cn_u64(record: &EnumerationRecord) -> Option<u64> {
    record.cn.to_u64()
}
