use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{BitSet, FcaError, FormalContext};

/// Default bound on `objects * attributes` accepted by [`build_lattice`].
pub const DEFAULT_MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Concept {
    pub extent: BitSet,
    pub intent: BitSet,
}

/// All formal concepts of a context with their cover relation.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    concepts: Vec<Concept>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    by_intent: BTreeMap<BitSet, usize>,
    top: usize,
    bottom: usize,
}

impl ConceptLattice {
    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Immediate subconcepts.
    pub fn lower_covers(&self, concept: usize) -> &[usize] {
        &self.lower[concept]
    }

    /// Immediate superconcepts.
    pub fn upper_covers(&self, concept: usize) -> &[usize] {
        &self.upper[concept]
    }

    pub fn find_by_intent(&self, intent: &BitSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }
}

/// `X'` picking whichever of the row-wise or column-wise scans is cheaper.
fn closure_intent(ctx: &FormalContext, objects: &BitSet) -> BitSet {
    let n_words = ctx.object_count().div_ceil(64).max(1);
    let m_words = ctx.attribute_count().div_ceil(64).max(1);
    let count = objects.count();
    if count * m_words <= ctx.attribute_count() * n_words {
        ctx.intent_of(objects)
    } else {
        let mut out = BitSet::empty(ctx.attribute_count());
        for m in 0..ctx.attribute_count() {
            if objects.is_subset(ctx.column(m)) {
                out.insert(m);
            }
        }
        out
    }
}

/// Close-by-One: every concept is generated exactly once from its canonical
/// parent, recognised by the prefix test on the new intent.
fn close_by_one(ctx: &FormalContext) -> Vec<Concept> {
    let m = ctx.attribute_count();
    let top_extent = BitSet::full(ctx.object_count());
    let top_intent = closure_intent(ctx, &top_extent);
    let mut out = Vec::new();
    let mut stack = alloc::vec![(top_extent, top_intent, 0usize)];
    while let Some((extent, intent, from)) = stack.pop() {
        for j in (from..m).rev() {
            if intent.contains(j) {
                continue;
            }
            let child_extent = extent.intersection(ctx.column(j));
            let child_intent = closure_intent(ctx, &child_extent);
            if intent.agrees_below(&child_intent, j) {
                stack.push((child_extent, child_intent, j + 1));
            }
        }
        out.push(Concept { extent, intent });
    }
    out
}

/// Builds the full concept lattice, covers included.
///
/// Fails with [`FcaError::ContextTooLarge`] when the incidence table exceeds
/// `max_cells`.
pub fn build_lattice(ctx: &FormalContext, max_cells: usize) -> Result<ConceptLattice, FcaError> {
    let cells = ctx.object_count().saturating_mul(ctx.attribute_count());
    if cells > max_cells {
        return Err(FcaError::ContextTooLarge { cells, limit: max_cells });
    }
    let concepts = close_by_one(ctx);
    let by_intent: BTreeMap<BitSet, usize> = concepts.iter().enumerate().map(|(i, c)| (c.intent.clone(), i)).collect();

    // Lower neighbours: for C = (A, B), each attribute m outside B yields the
    // candidate D = (A ∩ m')'. D is a cover iff exactly |D \ B| attributes
    // generate it.
    let mut lower = alloc::vec![Vec::new(); concepts.len()];
    let mut upper = alloc::vec![Vec::new(); concepts.len()];
    for (ci, c) in concepts.iter().enumerate() {
        let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
        for j in 0..ctx.attribute_count() {
            if c.intent.contains(j) {
                continue;
            }
            let d = closure_intent(ctx, &c.extent.intersection(ctx.column(j)));
            let di = by_intent[&d];
            *seen.entry(di).or_default() += 1;
        }
        for (di, hits) in seen {
            let added = concepts[di].intent.count() - c.intent.count();
            if hits == added {
                lower[ci].push(di);
                upper[di].push(ci);
            }
        }
    }

    let full_attrs = BitSet::full(ctx.attribute_count());
    let bottom = by_intent[&full_attrs];
    let top = concepts
        .iter()
        .position(|c| c.extent.count() == ctx.object_count())
        .expect("top concept");
    Ok(ConceptLattice { concepts, lower, upper, by_intent, top, bottom })
}
