//! Property tests for the structural invariants: conjugation symmetry,
//! serialization round trips, matching/cover duality, and gap-fill
//! post-conditions.

use proptest::prelude::*;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use plr_core::cells::CellSet;
use plr_core::conjugate::{conjugate, RolePermutation};
use plr_core::engines::bigraph::{maximum_matching, minimum_vertex_cover, Bigraph};
use plr_core::format::{parse_rect, serialize_rect};
use plr_core::gapfill::{gap_fill, GapInstance};
use plr_core::rect::PartialLatinRectangle;

fn rect_strategy() -> impl Strategy<Value = PartialLatinRectangle> {
    (1..=5usize, 1..=5usize, 1..=5usize, any::<u64>()).prop_map(|(rows, cols, syms, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rect = PartialLatinRectangle::empty(rows, cols, syms).unwrap();
        for _ in 0..(rows * cols) {
            let r = rng.random_range(0..rows);
            let c = rng.random_range(0..cols);
            let s = rng.random_range(0..syms);
            if rect.get(r, c).is_none() {
                if let Ok(next) = rect.with_entry(r, c, s) {
                    rect = next;
                }
            }
        }
        rect
    })
}

fn permutation_strategy() -> impl Strategy<Value = RolePermutation> {
    prop::sample::select(vec![
        [0usize, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ])
    .prop_map(|dest| RolePermutation::new(dest).unwrap())
}

proptest! {
    #[test]
    fn conjugation_preserves_counts_and_inverts(
        rect in rect_strategy(),
        sigma in permutation_strategy(),
    ) {
        let image = conjugate(&rect, &sigma);
        prop_assert_eq!(image.entry_count(), rect.entry_count());
        prop_assert_eq!(image.is_saturated(), rect.is_saturated());
        prop_assert_eq!(conjugate(&image, &sigma.inverse()), rect);
    }

    #[test]
    fn serialization_round_trips(rect in rect_strategy()) {
        let text = serialize_rect(&rect);
        let back = parse_rect(&text).unwrap();
        prop_assert_eq!(&back, &rect);
        prop_assert_eq!(serialize_rect(&back), text);
    }

    #[test]
    fn matching_size_equals_cover_size(
        edges in prop::collection::vec((0..6usize, 0..6usize), 0..24),
    ) {
        let mut g = Bigraph::new(6, 6);
        for &(l, r) in &edges {
            g.add_edge(l, r);
        }
        let matching = maximum_matching(&g);
        let (cover_l, cover_r) = minimum_vertex_cover(&g, &matching);
        prop_assert_eq!(matching.len(), cover_l.len() + cover_r.len());
        for (l, r) in edges {
            prop_assert!(cover_l.contains(&l) || cover_r.contains(&r));
        }
    }

    #[test]
    fn gap_fill_never_repeats_in_a_line(
        picks in prop::collection::vec((0..6usize, 0..6usize), 0..30),
        k in 1..5usize,
    ) {
        let mut cells = CellSet::new();
        for (r, c) in picks {
            if cells.row_count(r) < k && cells.col_count(c) < k {
                cells.insert(r, c);
            }
        }
        let total = cells.len();
        let inst = GapInstance::new(6, 6, cells, k).unwrap();
        let fill = gap_fill(&inst, 0);
        prop_assert_eq!(fill.len(), total);
        for line in 0..6usize {
            let mut row_seen = std::collections::BTreeSet::new();
            let mut col_seen = std::collections::BTreeSet::new();
            for other in 0..6usize {
                if let Some(sym) = fill.get(&(line, other)) {
                    prop_assert!(*sym < k);
                    prop_assert!(row_seen.insert(*sym));
                }
                if let Some(sym) = fill.get(&(other, line)) {
                    prop_assert!(col_seen.insert(*sym));
                }
            }
        }
    }
}
