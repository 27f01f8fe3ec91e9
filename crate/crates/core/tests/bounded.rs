use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use topoctl_core::lab::{gen_clustered_plus_outlier, gen_uniform_random};
use topoctl_core::{
    bucket_of, interference_at, is_valid, lnn, network_interference, plan, r_min, transform,
    transform_on_grid, uniform_assignment, BoundedPlan, GridSpec, Instance, MeasureMode, Model,
    RadiiAssignment, Transformed,
};

/// Valid inputs of three shapes: closed LNN, uniform above the threshold,
/// and random radii that never drop below it.
fn inputs(inst: &Instance, seed: u64) -> Vec<RadiiAssignment> {
    let rm = r_min(inst).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = (0..inst.len())
        .map(|_| rm * rng.gen_range(1.0..4.0))
        .collect();
    vec![
        lnn(inst).symmetric_closure(inst),
        uniform_assignment(inst, 2.5 * rm).unwrap(),
        RadiiAssignment::new(noisy).unwrap(),
    ]
}

fn suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..60u64 {
        let dim = 1 + (seed as usize % 3);
        let n = 2 + (seed as usize * 13) % 70;
        out.push(gen_uniform_random(n, dim, 1000 + seed, 20.0).unwrap());
    }
    for seed in 0..6 {
        out.push(gen_clustered_plus_outlier(40, 2, seed, 1.0, 30.0).unwrap());
    }
    out
}

/// BFS over sensors with `radius == R`, following only edges of both the
/// output network and the uniform-`R` network.
fn promoted_sensors_mutually_reachable(inst: &Instance, out: &[f64], radius: f64) -> bool {
    let tops: Vec<usize> = (0..inst.len()).filter(|&s| out[s] == radius).collect();
    let Some(&start) = tops.first() else {
        return true;
    };
    let joined = |u: usize, v: usize| {
        let d = inst.dist(u, v);
        d <= radius && out[u].min(out[v]) >= d
    };
    let mut seen = vec![false; inst.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(u) = queue.pop_front() {
        for (v, mark) in seen.iter_mut().enumerate() {
            if !*mark && joined(u, v) {
                *mark = true;
                queue.push_back(v);
            }
        }
    }
    tops.iter().all(|&s| seen[s])
}

/// Cluster partition recomputed from scratch: same bucket and joined by a
/// path of `R`-edges that never leaves the bucket.
fn oracle_clusters(inst: &Instance, grid: &GridSpec) -> BTreeSet<Vec<usize>> {
    let n = inst.len();
    let buckets: Vec<Vec<i64>> = inst.points().map(|p| bucket_of(p, grid)).collect();
    let mut label = vec![usize::MAX; n];
    let mut groups = BTreeSet::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        let mut group = vec![s];
        label[s] = s;
        let mut i = 0;
        while i < group.len() {
            let u = group[i];
            for v in 0..n {
                if label[v] == usize::MAX
                    && buckets[v] == buckets[u]
                    && inst.dist(u, v) <= grid.cell_side
                {
                    label[v] = s;
                    group.push(v);
                }
            }
            i += 1;
        }
        group.sort_unstable();
        groups.insert(group);
    }
    groups
}

fn check_plan(inst: &Instance, p: &BoundedPlan) {
    let radius = p.radius();
    let d = inst.dim();
    let dec = &p.decomposition;

    let produced: BTreeSet<Vec<usize>> = dec.clusters.iter().map(|c| c.members.clone()).collect();
    assert_eq!(produced, oracle_clusters(inst, &dec.grid));

    let mut per_bucket: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
    for c in &dec.clusters {
        *per_bucket.entry(&c.bucket).or_default() += 1;
    }
    assert!(per_bucket.values().all(|&k| k <= d.pow(d as u32)));

    let max_leaders = if d == 2 {
        12
    } else {
        d.pow(d as u32) * (d.pow(d as u32) - 1)
    };
    for (c, ls) in p.leaders.iter().enumerate() {
        assert!(!ls.is_empty() && ls.len() <= max_leaders.max(1));
        for &s in &dec.clusters[c].members {
            assert!(
                ls.iter().any(|&l| inst.dist(s, l) <= radius),
                "no leader near {s}"
            );
        }
        assert!(ls.iter().all(|&l| dec.cluster_of[l] == c));
    }

    // one witness pair for exactly the cluster pairs within reach
    let k = dec.clusters.len();
    let mut expected = BTreeMap::new();
    for a in 0..k {
        for b in a + 1..k {
            let mut best: Option<(usize, usize)> = None;
            for &u in &dec.clusters[a].members {
                for &v in &dec.clusters[b].members {
                    if inst.dist(u, v) <= radius {
                        let key = (u.min(v), u.max(v));
                        best = Some(best.map_or(key, |b| b.min(key)));
                    }
                }
            }
            if let Some(pair) = best {
                expected.insert((a, b), pair);
            }
        }
    }
    let mut found = BTreeMap::new();
    for w in &p.witnesses {
        assert_eq!(dec.cluster_of[w.u], w.cluster_u);
        assert_eq!(dec.cluster_of[w.v], w.cluster_v);
        assert!(inst.dist(w.u, w.v) <= radius);
        let (bu, bv) = (
            &dec.clusters[w.cluster_u].bucket,
            &dec.clusters[w.cluster_v].bucket,
        );
        assert!(bu.iter().zip(bv).all(|(a, b)| (a - b).abs() <= 1));
        let key = (w.cluster_u.min(w.cluster_v), w.cluster_u.max(w.cluster_v));
        assert!(found.insert(key, (w.u.min(w.v), w.u.max(w.v))).is_none());
    }
    assert_eq!(found, expected);

    if d == 2 {
        for c in 0..k {
            assert!(p.neighbors(c).len() <= 32);
        }
        assert!(p.promoted_per_cluster().iter().all(|&m| m <= 76));
    }
}

fn check_transform(inst: &Instance, r_in: &RadiiAssignment, t: &Transformed, model: Model) {
    let radius = t.plan.radius();
    let out = t.assignment.radii();
    assert!(out.iter().all(|&r| r <= radius));
    assert!(is_valid(inst, &t.assignment, model).unwrap());
    let promoted = t.plan.promoted();
    for s in 0..inst.len() {
        if promoted[s] {
            assert_eq!(out[s], radius);
        } else {
            assert_eq!(out[s], r_in.get(s).min(radius));
        }
    }
    assert!(t.raised(r_in).iter().all(|&s| promoted[s]));
    assert!(promoted_sensors_mutually_reachable(inst, out, radius));

    let raised = t.raised(r_in);
    let mut probes: Vec<Vec<f64>> = inst.points().map(<[f64]>::to_vec).collect();
    if let Some(mode) = MeasureMode::exact_for(inst.dim()) {
        probes.push(
            network_interference(inst, &t.assignment, mode, None, None)
                .unwrap()
                .witness_point,
        );
    }
    for p in &probes {
        let near = raised
            .iter()
            .filter(|&&s| topoctl_core::geometry::euclidean(inst.point(s), p) <= radius)
            .count();
        let before = interference_at(inst, r_in, p).unwrap();
        let after = interference_at(inst, &t.assignment, p).unwrap();
        assert!(after <= before + near);
    }
}

#[test]
fn plans_match_brute_force_oracles() {
    for inst in suite() {
        let rm = r_min(&inst).unwrap();
        for factor in [1.0, 1.7, 3.0] {
            check_plan(&inst, &plan(&inst, rm * factor).unwrap());
        }
    }
}

#[test]
fn transform_guarantees_on_valid_inputs() {
    for (i, inst) in suite().into_iter().enumerate() {
        let rm = r_min(&inst).unwrap();
        for r_in in inputs(&inst, i as u64) {
            for factor in [1.0, 2.0] {
                let t = transform(&inst, &r_in, rm * factor, Model::Symmetric).unwrap();
                check_transform(&inst, &r_in, &t, Model::Symmetric);
            }
        }
    }
}

#[test]
fn asymmetric_pipeline_keeps_the_composed_bound() {
    for seed in 0..20 {
        let n = 16 + seed as usize * 6;
        let inst = gen_uniform_random(n, 2, 2000 + seed, 10.0).unwrap();
        let rm = r_min(&inst).unwrap();
        let res = lnn(&inst);
        let t = transform(&inst, &res.assignment, rm, Model::Asymmetric).unwrap();
        check_transform(&inst, &res.assignment, &t, Model::Asymmetric);
        let value = network_interference(&inst, &t.assignment, MeasureMode::Exact2d, None, None)
            .unwrap()
            .value;
        let log = n.next_power_of_two().trailing_zeros() as usize;
        assert!(value <= 6 * log + 1 + 9 * 4 * 76);
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let inst = Instance::on_line(&[0.0, 1.0, 5.0]).unwrap();
    let short = RadiiAssignment::new(vec![1.0, 1.0, 1.0]).unwrap();
    assert_eq!(
        transform(&inst, &short, 4.0, Model::Symmetric)
            .unwrap_err()
            .to_string(),
        "input assignment not valid"
    );
    let fine = uniform_assignment(&inst, 4.0).unwrap();
    let err = transform(&inst, &fine, 3.0, Model::Symmetric).unwrap_err();
    assert!(err
        .to_string()
        .starts_with("radius below connectivity threshold"));
}

#[test]
fn one_dimensional_buckets_are_single_clusters() {
    for seed in 0..30 {
        let inst = gen_uniform_random(50, 1, seed, 30.0).unwrap();
        let p = plan(&inst, r_min(&inst).unwrap()).unwrap();
        let buckets: BTreeSet<_> = p.decomposition.clusters.iter().map(|c| &c.bucket).collect();
        assert_eq!(buckets.len(), p.decomposition.clusters.len());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Inserting a sensor two or more buckets away from `s` leaves `r_out(s)`
    /// unchanged when the grid and `R` are fixed.
    #[test]
    fn far_insertions_do_not_reach(
        seed in any::<u64>(),
        n in 5usize..40,
        near in any::<prop::sample::Index>(),
        jitter in prop::collection::vec(-0.2..0.2f64, 2),
    ) {
        let inst = gen_uniform_random(n, 2, seed, 10.0).unwrap();
        let radius = 2.0 * r_min(&inst).unwrap();
        let grid = GridSpec::new(radius, vec![-1.0, -1.0]).unwrap();
        let r_in = uniform_assignment(&inst, radius).unwrap();
        let before = transform_on_grid(&inst, &r_in, grid.clone(), Model::Symmetric).unwrap();

        let anchor = near.index(n);
        let q: Vec<f64> = inst.point(anchor).iter().zip(&jitter).map(|(x, j)| x + j * radius).collect();
        let bigger = inst.with_point(&q).unwrap();
        prop_assume!(r_min(&bigger).unwrap() <= radius);
        let r_big = uniform_assignment(&bigger, radius).unwrap();
        let after = transform_on_grid(&bigger, &r_big, grid.clone(), Model::Symmetric).unwrap();

        let qb = bucket_of(&q, &grid);
        let promoted_before = before.plan.promoted();
        let promoted_after = after.plan.promoted();
        for s in 0..n {
            let sb = bucket_of(inst.point(s), &grid);
            let cheb = sb.iter().zip(&qb).map(|(a, b)| (a - b).abs()).max().unwrap();
            if cheb >= 2 {
                prop_assert_eq!(before.assignment.get(s), after.assignment.get(s));
                prop_assert_eq!(promoted_before[s], promoted_after[s]);
            }
        }
    }
}
