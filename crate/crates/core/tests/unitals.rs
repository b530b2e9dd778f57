use std::collections::BTreeSet;

use num_bigint::BigUint;
use unitals::autgroup::setwise_stabilizer;
use unitals::design::{induced_design, is_unital, PointSet, ProjectivePlane, Unital};
use unitals::geometry::{desarguesian_plane, hermitian_unital};
use unitals::isomorph::{analyze_design, unital_aut_group};
use unitals::orbit_search::{
    exhaustive_search, orbit_union_search, run_campaign, OrbitFamily, SearchConfig, DEFAULT_EXHAUSTIVE_CAP,
};

/// Every line meets `set` in 1 or q+1 points, and `set` has q³+1 points.
fn naive_unital(lines: &[Vec<u32>], set: &BTreeSet<u32>, q: usize) -> bool {
    set.len() == q * q * q + 1
        && lines.iter().all(|l| {
            let k = l.iter().filter(|p| set.contains(p)).count();
            k == 1 || k == q + 1
        })
}

/// Each point of the unital lies on one tangent and q² secants.
fn tangent_counts_hold(plane: &ProjectivePlane, set: &BTreeSet<u32>, q: usize) -> bool {
    set.iter().all(|&p| {
        let mut tangents = 0;
        let mut secants = 0;
        for &l in plane.lines_through(p as usize) {
            match plane.line(l as usize).iter().filter(|x| set.contains(x)).count() {
                1 => tangents += 1,
                k if k == q + 1 => secants += 1,
                _ => return false,
            }
        }
        tangents == 1 && secants == q * q
    })
}

/// |PGammaU(3, q)| for q = p^e.
fn pgammau_order(q: u64) -> u64 {
    let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
    let e = (1..).find(|&e| p.pow(e) == q).unwrap() as u64;
    q.pow(3) * (q.pow(3) + 1) * (q * q - 1) * 2 * e
}

fn set_of(s: &PointSet) -> BTreeSet<u32> {
    s.members().iter().copied().collect()
}

fn unbounded() -> SearchConfig {
    SearchConfig { node_budget: u64::MAX, time_budget_secs: 3600.0, ..SearchConfig::default() }
}

#[test]
fn hermitian_curves_are_unitals() {
    for q in 2..=5usize {
        let plane = desarguesian_plane((q * q) as u32).unwrap();
        let h = hermitian_unital(q).unwrap();
        assert_eq!(h.len(), q * q * q + 1);
        assert!(is_unital(&plane, &h, q).unwrap());
        assert!(naive_unital(plane.lines(), &set_of(&h), q));
        assert!(tangent_counts_hold(&plane, &set_of(&h), q));
    }
}

#[test]
fn hermitian_design_groups_match_pgammau() {
    for q in 2..=5usize {
        let plane = desarguesian_plane((q * q) as u32).unwrap();
        let u = Unital::new(&plane, hermitian_unital(q).unwrap(), q).unwrap();
        let design = induced_design(&plane, &u).unwrap();
        assert_eq!(design.blocks.len(), q * q * (q * q - q + 1));
        assert!(design.is_pairwise_balanced());
        let (group, orbits) = unital_aut_group(&design);
        assert_eq!(group.order(), &BigUint::from(pgammau_order(q as u64)), "q = {q}");
        assert_eq!(orbits.sizes(), vec![q * q * q + 1]);
        // every collineation fixing the curve is a design automorphism, and
        // for the classical unital these are all of them
        assert_eq!(setwise_stabilizer(&plane, u.members()).order(), group.order());
    }
}

/// All 9-point unitals of PG(2,4) by walking every 9-subset of 21 bits.
fn bitmask_oracle(plane: &ProjectivePlane) -> BTreeSet<Vec<u32>> {
    let masks: Vec<u32> = plane.lines().iter().map(|l| l.iter().fold(0, |m, &p| m | 1 << p)).collect();
    let mut found = BTreeSet::new();
    let mut s: u32 = (1 << 9) - 1;
    while s < 1 << 21 {
        if masks.iter().all(|m| matches!((m & s).count_ones(), 1 | 3)) {
            found.insert((0..21).filter(|b| s >> b & 1 == 1).collect());
        }
        // next subset of the same size
        let c = s & s.wrapping_neg();
        let r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    found
}

#[test]
fn exhaustive_search_on_pg24_matches_oracle_and_singleton_search() {
    let plane = desarguesian_plane(4).unwrap();
    let oracle = bitmask_oracle(&plane);
    assert_eq!(oracle.len(), 280);

    let exhaustive: BTreeSet<Vec<u32>> = exhaustive_search(&plane, 2, DEFAULT_EXHAUSTIVE_CAP)
        .unwrap()
        .into_iter()
        .map(|u| u.members().members().to_vec())
        .collect();
    assert_eq!(exhaustive, oracle);

    let out = orbit_union_search(&plane, &OrbitFamily::singletons(21), &unbounded()).unwrap();
    assert!(!out.budget_hit);
    let heuristic: BTreeSet<Vec<u32>> = out.unitals.iter().map(|f| f.unital.members().members().to_vec()).collect();
    assert_eq!(heuristic.len(), out.unitals.len(), "no set reported twice");
    assert_eq!(heuristic, oracle);
    for u in &oracle {
        assert!(tangent_counts_hold(&plane, &u.iter().copied().collect(), 2));
    }
}

#[test]
fn disabling_pruning_changes_nothing_but_effort() {
    let plane = desarguesian_plane(4).unwrap();
    let h = hermitian_unital(2).unwrap();
    let fam = OrbitFamily::from_group("stabilizer", &setwise_stabilizer(&plane, &h), 21);
    let pruned = orbit_union_search(&plane, &fam, &unbounded()).unwrap();
    let raw = orbit_union_search(&plane, &fam, &SearchConfig { pruning: false, ..unbounded() }).unwrap();
    assert_eq!(pruned.unitals, raw.unitals);
    assert!(pruned.nodes <= raw.nodes);
}

#[test]
fn stabilizer_orbits_rediscover_hermitian_in_pg225() {
    let plane = desarguesian_plane(25).unwrap();
    let h = hermitian_unital(5).unwrap();
    let stab = setwise_stabilizer(&plane, &h);
    assert_eq!(stab.order(), &BigUint::from(pgammau_order(5)));
    let fam = OrbitFamily::from_group("hermitian stabilizer", &stab, 651);
    let out = orbit_union_search(&plane, &fam, &unbounded()).unwrap();
    assert!(!out.budget_hit);
    assert!(out.unitals.iter().any(|f| f.unital.members() == &h));
    for f in &out.unitals {
        let set = set_of(f.unital.members());
        assert!(naive_unital(plane.lines(), &set, 5));
        assert!(tangent_counts_hold(&plane, &set, 5));
    }
}

fn small_campaign_config() -> SearchConfig {
    SearchConfig { node_budget: 200_000, time_budget_secs: 600.0, seed: 7, ..SearchConfig::default() }
}

#[test]
fn campaign_on_pg29_finds_non_isomorphic_unitals() {
    let plane = desarguesian_plane(9).unwrap();
    let report = run_campaign(&plane, "PG2_9", &small_campaign_config()).unwrap();
    assert_eq!(report.plane_group_order, BigUint::from(84_913_920u64));
    assert_eq!(report.plane_orbit_count, 1);
    assert!(!report.records.is_empty());
    let certs: BTreeSet<_> = report.records.iter().map(|r| r.certificate.clone()).collect();
    assert_eq!(certs.len(), report.records.len());
    for pair in report.records.windows(2) {
        assert!(pair[0].unital_group_order >= pair[1].unital_group_order);
    }
    for r in &report.records {
        let set: BTreeSet<u32> = r.members.iter().copied().collect();
        assert!(naive_unital(plane.lines(), &set, 3));
        assert!(tangent_counts_hold(&plane, &set, 3));
        assert_eq!(r.unital_orbit_sizes.iter().sum::<usize>(), 28);
        // the setwise stabilizer acts faithfully on the design, so it
        // divides the design group order
        assert_eq!(&r.unital_group_order % &r.stabilizer_order, BigUint::from(0u32));
        // the subgroup whose orbits built the unital fixes it
        let family = &report.families[r.provenance.family_index];
        assert_eq!(&r.stabilizer_order % &family.subgroup_order, BigUint::from(0u32));
        // re-derive the group from the stored members
        let u = Unital::new(&plane, PointSet::new(r.members.iter().map(|&p| p as usize), 91).unwrap(), 3).unwrap();
        let a = analyze_design(&induced_design(&plane, &u).unwrap());
        assert_eq!(a.certificate, r.certificate);
        assert_eq!(a.group.order(), &r.unital_group_order);
    }
}

#[test]
fn campaign_is_reproducible_across_thread_counts() {
    let plane = desarguesian_plane(9).unwrap();
    let cfg = small_campaign_config();
    let seq = run_campaign(&plane, "PG2_9", &cfg).unwrap();
    let again = run_campaign(&plane, "PG2_9", &cfg).unwrap();
    let par = run_campaign(&plane, "PG2_9", &SearchConfig { threads: 4, ..cfg }).unwrap();
    assert_eq!(seq, again);
    assert_eq!(seq, par);
}

#[test]
fn order_five_subgroups_of_pg225_have_orbits_of_size_one_or_five() {
    let plane = desarguesian_plane(25).unwrap();
    let group = unitals::autgroup::plane_automorphism_group(&plane);
    let cfg = SearchConfig { orders: vec![5], samples_per_order: 4, ..SearchConfig::default() };
    let families = unitals::orbit_search::subgroup_orbit_families(&plane, &group, &cfg);
    assert!(!families.is_empty());
    for f in &families {
        assert_eq!(f.subgroup_order, BigUint::from(5u32));
        assert!(f.orbits.iter().all(|o| o.len() == 1 || o.len() == 5));
        assert_eq!(f.orbits.iter().map(PointSet::len).sum::<usize>(), 651);
        assert!(group.contains(&lift(&plane, &f.generators[0])));
    }
}

/// A point collineation extended to the lines, as an element of the
/// incidence graph's automorphism group.
fn lift(plane: &ProjectivePlane, g: &unitals::Perm) -> unitals::Perm {
    let v = plane.num_points();
    let index: std::collections::HashMap<&[u32], usize> =
        plane.lines().iter().enumerate().map(|(i, l)| (l.as_slice(), i)).collect();
    let mut images = g.images().to_vec();
    for line in plane.lines() {
        let mut m: Vec<u32> = line.iter().map(|&p| g.apply(p)).collect();
        m.sort_unstable();
        images.push((v + index[m.as_slice()]) as u32);
    }
    unitals::Perm::from_images(images).unwrap()
}
