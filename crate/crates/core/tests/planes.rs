use proptest::prelude::*;
use unitals::design::{validate_plane, ProjectivePlane};
use unitals::geometry::desarguesian_plane;
use unitals::report::{parse_plane, plane_to_json, plane_to_text, PlaneFormat};

/// Straight from the definition: every pair of points on exactly one line,
/// every pair of lines through exactly one point.
fn naive_is_plane(lines: &[Vec<usize>], n: usize) -> bool {
    let v = n * n + n + 1;
    if lines.len() != v || lines.iter().any(|l| l.len() != n + 1) {
        return false;
    }
    for a in 0..v {
        for b in a + 1..v {
            if lines.iter().filter(|l| l.contains(&a) && l.contains(&b)).count() != 1 {
                return false;
            }
        }
    }
    for i in 0..v {
        for j in i + 1..v {
            if lines[i].iter().filter(|p| lines[j].contains(p)).count() != 1 {
                return false;
            }
        }
    }
    true
}

#[test]
fn desarguesian_planes_pass_every_axiom() {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25] {
        let plane = desarguesian_plane(q).unwrap();
        let n = q as usize;
        assert_eq!(plane.num_points(), n * n + n + 1);
        let report = validate_plane(&plane.to_raw_lines(), n).unwrap();
        assert!(report.is_ok(), "PG(2,{q}): {:?}", report.violations);
    }
}

#[test]
fn validator_agrees_with_definition_on_small_planes() {
    for q in [2u32, 3, 4, 5] {
        let lines = desarguesian_plane(q).unwrap().to_raw_lines();
        assert!(naive_is_plane(&lines, q as usize));
    }
}

#[test]
fn unsupported_orders_are_rejected() {
    for q in [1u32, 6, 10, 12] {
        assert!(desarguesian_plane(q).is_err(), "q = {q}");
    }
}

#[test]
fn pg225_round_trips_byte_for_byte() {
    let plane = desarguesian_plane(25).unwrap();
    for base in [0u8, 1] {
        let text = plane_to_text(&plane, base);
        assert_eq!(text.lines().count(), 651);
        assert!(text.lines().all(|l| l.split_whitespace().count() == 26));
        let back = parse_plane(&text, PlaneFormat::Text, Some(base), "pg").unwrap();
        assert_eq!(plane_to_text(&back.plane, base), text);

        let json = plane_to_json(&plane, "pg", base);
        let back = parse_plane(&json, PlaneFormat::Json, Some(base), "pg").unwrap();
        assert_eq!(plane_to_json(&back.plane, "pg", base), json);
        assert_eq!(back.plane, plane);
    }
}

fn pg4() -> Vec<Vec<usize>> {
    desarguesian_plane(4).unwrap().to_raw_lines()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Moving one point of one line to a point it does not contain breaks
    /// the plane, and the validator agrees with the definition.
    #[test]
    fn single_point_substitution_breaks_the_plane(line in 0usize..21, slot in 0usize..5, target in 0usize..21) {
        let mut lines = pg4();
        prop_assume!(!lines[line].contains(&target));
        lines[line][slot] = target;
        let report = validate_plane(&lines, 4).unwrap();
        prop_assert!(!report.is_ok());
        prop_assert!(!naive_is_plane(&lines, 4));
        prop_assert!(ProjectivePlane::new(4, lines).is_err());
    }

    /// Relabelling points keeps a plane a plane.
    #[test]
    fn relabelled_planes_stay_valid(seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..21).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let lines: Vec<Vec<usize>> = pg4().into_iter().map(|l| l.into_iter().map(|p| perm[p]).collect()).collect();
        prop_assert!(validate_plane(&lines, 4).unwrap().is_ok());
    }
}
