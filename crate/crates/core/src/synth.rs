//! Seeded synthetic projects for end-to-end runs and benchmarks.
//!
//! Commits arrive with exponential gaps, defect density decays over the
//! project's life, and the size/diffusion features of defective commits are
//! shifted upward so that learners have something to find.

use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};

use crate::miner::{releases_from_commits, CommitRecord, Label, ReleaseInfo, SECONDS_PER_DAY};
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthSpec {
    pub commits: usize,
    pub releases: usize,
    pub seed: u64,
    pub start: i64,
    pub mean_gap_hours: f64,
    pub initial_defect_rate: f64,
    pub final_defect_rate: f64,
    /// Separation between defective and clean commits in latent units.
    pub signal: f64,
    pub authors: usize,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            commits: 1000,
            releases: 10,
            seed: 0,
            start: 1_500_000_000,
            mean_gap_hours: 24.0,
            initial_defect_rate: 0.45,
            final_defect_rate: 0.10,
            signal: 1.2,
            authors: 20,
        }
    }
}

/// Defect probability at position `i` of `n`.
pub fn defect_rate(spec: &SynthSpec, i: usize) -> f64 {
    let t = i as f64 / spec.commits.max(1) as f64;
    spec.final_defect_rate + (spec.initial_defect_rate - spec.final_defect_rate) * (-3.0 * t).exp()
}

/// Generate a project: commits in chronological order with releases of
/// near-equal size, and the matching release spans.
pub fn generate(spec: &SynthSpec) -> (Vec<CommitRecord>, Vec<ReleaseInfo>) {
    let mut rng = seed::rng(seed::derive(spec.seed, &[0x5717]));
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let gap = Exp::new(1.0 / (spec.mean_gap_hours * 3600.0)).expect("positive rate");
    let authors = spec.authors.max(1);
    let releases = spec.releases.max(1);

    let mut author_history: Vec<Vec<i64>> = vec![Vec::new(); authors];
    let mut commits = Vec::with_capacity(spec.commits);
    let mut t = spec.start;
    let mut parent: Option<String> = None;

    for i in 0..spec.commits {
        t += 1 + gap.sample(&mut rng) as i64;
        let defective = rng.random_bool(defect_rate(spec, i).clamp(0.0, 1.0));
        let shift = if defective {
            spec.signal / 2.0
        } else {
            -spec.signal / 2.0
        };
        let z = shift + normal.sample(&mut rng);
        let mut noise = || normal.sample(&mut rng);

        let nf = ((0.4 + 0.5 * z + 0.5 * noise()).exp().round() as u64).max(1);
        let nd = 1 + (noise().abs() * nf as f64 / 2.0) as u64 % nf;
        let ns = 1 + (noise().abs() * nd as f64 / 2.0) as u64 % nd;
        let la = (3.0 + 0.8 * z + noise()).exp().round() as u64;
        let ld = (2.0 + 0.6 * z + noise()).exp().round() as u64;
        let lt = (5.0 + 0.3 * z + noise()).exp();
        let entropy = if nf == 1 {
            0.0
        } else {
            let spread = 1.0 / (1.0 + (-z - noise()).exp());
            (nf as f64).log2() * spread
        };
        let ndev = ((0.8 + 0.3 * z + 0.5 * noise()).exp().round() as u64).max(1);
        let age = (3.0 - 0.3 * z + noise()).exp();
        let nuc = nf + (1.0 + 0.3 * z + noise()).exp().round() as u64;
        let fix = rng.random_bool(if defective { 0.35 } else { 0.25 });

        let author = rng.random_range(0..authors);
        let prior = &author_history[author];
        let exp = prior.len() as u64;
        let rexp = prior
            .iter()
            .map(|&p| 1.0 / (1.0 + (t - p) as f64 / (365.0 * SECONDS_PER_DAY)))
            .sum();
        let sexp = (exp as f64 * rng.random_range(0.2..=1.0)).round() as u64;
        author_history[author].push(t);

        let h = seed::derive(spec.seed, &[i as u64]);
        let hash = format!("{h:016x}{:016x}{:08x}", seed::derive(h, &[1]), i as u32);
        commits.push(CommitRecord {
            hash: hash.clone(),
            author: format!("dev{author}@example.org"),
            timestamp: t,
            ns,
            nd,
            nf,
            entropy,
            la,
            ld,
            lt,
            fix,
            ndev,
            age,
            nuc,
            exp,
            rexp,
            sexp,
            label: Label::from_bool(defective),
            release: Some(i * releases / spec.commits),
            message: if fix {
                format!("fix issue {i}")
            } else {
                format!("change {i}")
            },
            parent: parent.replace(hash),
        });
    }
    let releases = releases_from_commits(&commits);
    (commits, releases)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_and_invariants() {
        let spec = SynthSpec::default();
        let (commits, releases) = generate(&spec);
        assert_eq!(commits.len(), 1000);
        assert_eq!(releases.len(), 10);
        assert!(releases.iter().all(|r| r.commit_count == 100));
        assert!(commits.windows(2).all(|w| w[0].timestamp < w[1].timestamp));
        for c in &commits {
            assert!(c.nf >= c.nd && c.nd >= c.ns && c.ns >= 1);
            assert!(c.entropy >= 0.0 && c.entropy <= (c.nf as f64).log2() + 1e-12);
            if c.nf == 1 {
                assert_eq!(c.entropy, 0.0);
            }
        }
    }

    #[test]
    fn defects_decay() {
        let (commits, _) = generate(&SynthSpec::default());
        let rate = |s: &[CommitRecord]| {
            s.iter().filter(|c| c.is_defective()).count() as f64 / s.len() as f64
        };
        assert!(rate(&commits[..200]) > rate(&commits[800..]) + 0.1);
    }

    #[test]
    fn seeded() {
        let a = generate(&SynthSpec::default());
        let b = generate(&SynthSpec::default());
        assert_eq!(a, b);
        let c = generate(&SynthSpec {
            seed: 1,
            ..SynthSpec::default()
        });
        assert_ne!(a.0, c.0);
    }
}
