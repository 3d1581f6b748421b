use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::{BitSet, ConceptLattice, GroupKey, ScaledContext};

/// Walks down from the top concept to the concept whose extent is
/// `required'`, always stepping to a lower cover that still contains it.
fn descend(lattice: &ConceptLattice, required: &BitSet, target: &BitSet) -> usize {
    let mut current = lattice.top();
    loop {
        let c = &lattice.concepts()[current];
        if required.is_subset(&c.intent) {
            return current;
        }
        current = *lattice
            .lower_covers(current)
            .iter()
            .find(|&&child| target.is_subset(&lattice.concepts()[child].extent))
            .expect("a lattice always has a lower cover above the target concept");
    }
}

/// Tuples satisfying every scaled predicate, per observed group.
///
/// Each group's extent is read off the concept generated by its group-value
/// attributes together with all predicate attributes. Groups observed in the
/// sample appear even when that extent is empty.
pub fn group_extents(lattice: &ConceptLattice, scaled: &ScaledContext) -> BTreeMap<GroupKey, BitSet> {
    let ctx = &scaled.context;
    let mut combos: BTreeSet<&[usize]> = (0..scaled.object_count()).map(|o| scaled.object_group_attributes(o)).collect();
    if combos.is_empty() && scaled.group_columns() == 0 {
        // No objects: only the global group of a query without GROUP BY.
        combos.insert(&[]);
    }
    let mut out = BTreeMap::new();
    for combo in combos {
        let mut required = BitSet::from_indices(ctx.attribute_count(), scaled.predicate_attributes());
        for &a in combo {
            required.insert(a);
        }
        let target = ctx.extent_of(&required);
        let concept = descend(lattice, &required, &target);
        let extent = lattice.concepts()[concept].extent.clone();
        debug_assert_eq!(extent, target);
        out.insert(scaled.group_key(combo), extent);
    }
    out
}

/// Graphviz rendering of the cover relation; nodes read `|extent|/intent`.
pub fn to_dot(lattice: &ConceptLattice, scaled: &ScaledContext) -> alloc::string::String {
    use core::fmt::Write;
    let names = scaled.context.attribute_names();
    let mut out = alloc::string::String::from("digraph lattice {\n  rankdir=TB;\n");
    for (i, c) in lattice.concepts().iter().enumerate() {
        let intent: Vec<&str> = c.intent.iter().map(|m| names[m].as_str()).collect();
        let label = alloc::format!("{}/{{{}}}", c.extent.count(), intent.join(", ")).replace('"', "\\\"");
        let _ = writeln!(out, "  c{i} [label=\"{label}\"];");
    }
    for i in 0..lattice.len() {
        for &j in lattice.lower_covers(i) {
            let _ = writeln!(out, "  c{i} -> c{j};");
        }
    }
    out.push_str("}\n");
    out
}
