use meta_smgo::config::SmgoConfig;
use meta_smgo::meta::{
    discount, meta_init_gamma, meta_init_point, meta_run, modified_exploitation_point, shepard,
    update_similarity, MetaConfig, MetaDataset, MetaTask, SimilarityVector, SimplexLeastSquares,
    SIMPLEX_TOL,
};
use meta_smgo::problem::{distance, BoxDomain, Problem, Sample};
use proptest::prelude::*;

fn on_simplex(s: &[f64]) -> bool {
    s.iter().all(|v| *v >= 0.0) && (s.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_TOL
}

fn simplex(m: usize) -> impl Strategy<Value = SimilarityVector> {
    prop::collection::vec(0.0f64..1.0, m).prop_map(|w| {
        let w: Vec<f64> = w.into_iter().map(|v| v + 1e-3).collect();
        let total: f64 = w.iter().sum();
        let mut s: Vec<f64> = w.iter().map(|v| v / total).collect();
        let head: f64 = s[1..].iter().sum();
        s[0] = 1.0 - head;
        SimilarityVector::new(s).unwrap()
    })
}

fn task() -> impl Strategy<Value = MetaTask> {
    (
        prop::collection::vec((prop::collection::vec(-5.0f64..5.0, 2), -50.0f64..50.0), 1..8),
        0.01f64..100.0,
    )
        .prop_map(|(pts, gamma)| {
            let samples: Vec<Sample> = pts.into_iter().map(|(x, z)| Sample { x, z, c: vec![1.0] }).collect();
            let best = samples.iter().min_by(|a, b| a.z.total_cmp(&b.z)).unwrap().clone();
            MetaTask { params: vec![], x_star: best.x, z_star: best.z, samples, gamma_hat: vec![gamma, 1.0] }
        })
}

fn dataset() -> impl Strategy<Value = MetaDataset> {
    prop::collection::vec(task(), 1..6)
        .prop_map(|tasks| MetaDataset::new(BoxDomain::cube(2, -5.0, 5.0).unwrap(), 1, tasks).unwrap())
}

fn dataset_and_weights() -> impl Strategy<Value = (MetaDataset, SimilarityVector, SimilarityVector)> {
    dataset().prop_flat_map(|ds| {
        let m = ds.len();
        (Just(ds), simplex(m), simplex(m))
    })
}

proptest! {
    #[test]
    fn warm_start_lies_in_the_hull((ds, s, _) in dataset_and_weights()) {
        let x = meta_init_point(&ds, &s).unwrap();
        for j in 0..2 {
            let lo = ds.tasks().iter().map(|t| t.x_star[j]).fold(f64::INFINITY, f64::min);
            let hi = ds.tasks().iter().map(|t| t.x_star[j]).fold(f64::NEG_INFINITY, f64::max);
            prop_assert!(x[j] >= lo - 1e-12 && x[j] <= hi + 1e-12);
        }
        let g = meta_init_gamma(&ds, &s).unwrap();
        let gmin = ds.tasks().iter().map(MetaTask::gamma_f).fold(f64::INFINITY, f64::min);
        prop_assert!(g <= ds.gamma_f_max() * (1.0 + 1e-12));
        prop_assert!(g >= gmin * (1.0 - 1e-12));
    }

    #[test]
    fn update_stays_on_simplex((_, a, b) in dataset_and_weights(), tau in 0.0f64..=1.0, n in 1usize..200) {
        let s = update_similarity(&a, &b, tau, n);
        prop_assert!(on_simplex(s.as_slice()));
        if tau == 0.0 {
            prop_assert_eq!(s, a);
        }
    }

    #[test]
    fn steered_point_lies_between_minimizer_and_attractor(
        (ds, s, _) in dataset_and_weights(),
        theta in prop::collection::vec(-5.0f64..5.0, 2),
        tau in 0.0f64..=1.0,
        n in 1usize..30,
    ) {
        let attractor = meta_init_point(&ds, &s).unwrap();
        let p = modified_exploitation_point(&theta, &s, &ds, tau, n);
        let w = discount(tau, n);
        prop_assert!((0.0..=1.0).contains(&w));
        let (a, b, c) = (distance(&theta, &p), distance(&p, &attractor), distance(&theta, &attractor));
        prop_assert!((a + b - c).abs() <= 1e-9, "{a} + {b} != {c}");
        prop_assert!((a - w * c).abs() <= 1e-9);
    }

    #[test]
    fn shepard_is_exact_and_bounded(t in task(), q in prop::collection::vec(-6.0f64..6.0, 2)) {
        for s in &t.samples {
            prop_assert_eq!(shepard(&t.samples, &s.x), s.z);
        }
        let lo = t.samples.iter().map(|s| s.z).fold(f64::INFINITY, f64::min);
        let hi = t.samples.iter().map(|s| s.z).fold(f64::NEG_INFINITY, f64::max);
        let v = shepard(&t.samples, &q);
        prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
    }

    #[test]
    fn least_squares_beats_uniform_and_vertices(
        m in 1usize..6,
        rows in prop::collection::vec((-10.0f64..10.0, prop::collection::vec(-10.0f64..10.0, 6)), 1..15),
    ) {
        let mut ls = SimplexLeastSquares::new(m);
        for (z, zhat) in &rows {
            ls.push(*z, &zhat[..m]);
        }
        let s = ls.solve();
        prop_assert!(on_simplex(&s));
        let best = ls.objective(&s);
        let slack = 1e-8 * (1.0 + best);
        prop_assert!(best <= ls.objective(SimilarityVector::uniform(m).as_slice()) + slack);
        for i in 0..m {
            prop_assert!(best <= ls.objective(SimilarityVector::indicator(m, i).as_slice()) + slack);
        }
    }

    #[test]
    fn least_squares_recovers_the_generating_task(
        m in 2usize..6,
        i in 0usize..6,
        rows in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 6), 8..20),
    ) {
        let i = i % m;
        let mut ls = SimplexLeastSquares::new(m);
        for zhat in &rows {
            ls.push(zhat[i], &zhat[..m]);
        }
        let s = ls.solve();
        prop_assert!((s[i] - 1.0).abs() <= 1e-6, "{s:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_logged_similarity_is_on_the_simplex(ds in dataset(), tau in 0.0f64..=1.0, seed in any::<u64>()) {
        let problem = Problem::new(|x: &[f64]| (x[0] - 1.0).powi(2) + x[1].abs(), BoxDomain::cube(2, -5.0, 5.0).unwrap())
            .with_constraint(|x: &[f64]| 4.0 - x[0]);
        let mcfg = MetaConfig { tau, base: SmgoConfig::defaults_for(1).with_iterations(15).with_seed(seed) };
        let out = meta_run(&problem, &ds, &mcfg).unwrap();
        prop_assert_eq!(out.run.log.records.len(), 15);
        for r in &out.run.log.records {
            let s = r.similarity.as_ref().unwrap();
            prop_assert!(on_simplex(s));
            prop_assert!(r.gamma_f >= 0.0);
        }
        for s in &out.similarity_hat {
            prop_assert!(on_simplex(s));
        }
        prop_assert_eq!(out.x_init, meta_init_point(&ds, &SimilarityVector::uniform(ds.len())).unwrap());
    }
}
