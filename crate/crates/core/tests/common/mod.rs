#![allow(dead_code)]

use std::collections::BTreeMap;

use refquest::world::{Entity, PropertyDef, PropertySchema, World};
use refquest::PropertyId;

/// A world over `n_props` properties with `n_vals` values each, one entity per
/// row, all sharing the label "thing". Duplicate rows are dropped.
pub fn world_from_rows(rows: &[Vec<usize>], n_props: usize, n_vals: usize) -> World {
    let schema = PropertySchema::new(
        (0..n_props)
            .map(|p| PropertyDef {
                name: format!("p{p}"),
                values: (0..n_vals).map(|v| format!("v{v}")).collect(),
            })
            .collect(),
    );
    let mut seen = Vec::new();
    for r in rows {
        if !seen.contains(r) {
            seen.push(r.clone());
        }
    }
    let entities = seen
        .iter()
        .enumerate()
        .map(|(i, row)| Entity {
            id: format!("e{i}"),
            label: "thing".into(),
            type_name: "thing".into(),
            assignment: row
                .iter()
                .enumerate()
                .map(|(p, v)| (format!("p{p}"), format!("v{v}")))
                .collect::<BTreeMap<_, _>>(),
        })
        .collect();
    World::validated(schema, entities).expect("rows are distinct")
}

/// Smallest number of properties that tells every pair of `entities` apart,
/// by exhaustive search over all property subsets.
pub fn brute_force_min_size(world: &World, entities: &[usize]) -> usize {
    let n = world.schema().len();
    assert!(n <= 20);
    let mut best = usize::MAX;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size >= best {
            continue;
        }
        if separates(world, entities, |p| mask & (1 << p) != 0) {
            best = size;
        }
    }
    best
}

/// True when, for every pair, some selected property differs.
pub fn separates(world: &World, entities: &[usize], selected: impl Fn(usize) -> bool) -> bool {
    let n = world.schema().len();
    for (k, &a) in entities.iter().enumerate() {
        for &b in &entities[k + 1..] {
            if !(0..n).any(|p| {
                selected(p) && world.code(a, PropertyId(p)) != world.code(b, PropertyId(p))
            }) {
                return false;
            }
        }
    }
    true
}
