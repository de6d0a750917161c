//! CART with Gini impurity, and bagged forests of such trees.

use rand::seq::index::sample;
use rand::Rng;

use crate::exec::Execution;
use crate::preprocess::Dataset;
use crate::seed;

#[derive(Debug, Clone, PartialEq)]
pub struct TreeParams {
    pub max_depth: Option<usize>,
    pub min_leaf: usize,
    /// Features considered at each split; `None` = all.
    pub max_features: Option<usize>,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: None,
            min_leaf: 1,
            max_features: None,
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        proba: f64,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone)]
pub struct DecisionTree {
    nodes: Vec<Node>,
}

fn gini(defective: f64, total: f64) -> f64 {
    if total <= 0.0 {
        return 0.0;
    }
    let p = defective / total;
    2.0 * p * (1.0 - p)
}

struct Builder<'a> {
    x: Vec<&'a [f64]>,
    y: Vec<bool>,
    params: &'a TreeParams,
    width: usize,
    rng: seed::Rng,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn build(&mut self, idx: Vec<usize>, depth: usize) -> usize {
        let total = idx.len() as f64;
        let defective = idx.iter().filter(|&&i| self.y[i]).count() as f64;
        let at = self.nodes.len();
        self.nodes.push(Node::Leaf {
            proba: defective / total,
        });
        let pure = defective == 0.0 || defective == total;
        let depth_ok = self.params.max_depth.is_none_or(|d| depth < d);
        if pure || !depth_ok || idx.len() < 2 * self.params.min_leaf.max(1) {
            return at;
        }
        let Some((feature, threshold)) = self.best_split(&idx, defective) else {
            return at;
        };
        let (left, right): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| self.x[i][feature] <= threshold);
        let left = self.build(left, depth + 1);
        let right = self.build(right, depth + 1);
        self.nodes[at] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        at
    }

    fn candidate_features(&mut self) -> Vec<usize> {
        match self.params.max_features {
            Some(m) if m < self.width => {
                let mut f = sample(&mut self.rng, self.width, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..self.width).collect(),
        }
    }

    /// Lowest weighted Gini split; ties keep the first feature/threshold seen.
    fn best_split(&mut self, idx: &[usize], defective: f64) -> Option<(usize, f64)> {
        let total = idx.len() as f64;
        let min_leaf = self.params.min_leaf.max(1);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut order = idx.to_vec();
        for feature in self.candidate_features() {
            order.sort_by(|&a, &b| {
                self.x[a][feature]
                    .total_cmp(&self.x[b][feature])
                    .then(a.cmp(&b))
            });
            let mut left_def = 0.0;
            for (pos, pair) in order.windows(2).enumerate() {
                let (i, j) = (pair[0], pair[1]);
                if self.y[i] {
                    left_def += 1.0;
                }
                let n_left = pos + 1;
                let (a, b) = (self.x[i][feature], self.x[j][feature]);
                if a == b || n_left < min_leaf || idx.len() - n_left < min_leaf {
                    continue;
                }
                let nl = n_left as f64;
                let nr = total - nl;
                let score = nl * gini(left_def, nl) + nr * gini(defective - left_def, nr);
                if best.is_none_or(|(s, _, _)| score < s - 1e-12) {
                    let mid = a + (b - a) / 2.0;
                    let threshold = if mid < b { mid } else { a };
                    best = Some((score, feature, threshold));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

impl DecisionTree {
    pub fn fit(data: &Dataset, params: &TreeParams, seed: u64) -> Self {
        let idx: Vec<usize> = (0..data.len()).collect();
        Self::fit_indices(data, &idx, params, seed)
    }

    /// Fit on a multiset of row indices (bootstrap samples repeat rows).
    pub(crate) fn fit_indices(
        data: &Dataset,
        idx: &[usize],
        params: &TreeParams,
        seed: u64,
    ) -> Self {
        let mut builder = Builder {
            x: idx
                .iter()
                .map(|&i| data.rows[i].features.as_slice())
                .collect(),
            y: idx
                .iter()
                .map(|&i| data.rows[i].label.is_defective())
                .collect(),
            params,
            width: data.width(),
            rng: seed::rng(seed),
            nodes: Vec::new(),
        };
        builder.build((0..idx.len()).collect(), 0);
        Self {
            nodes: builder.nodes,
        }
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { proba } => return *proba,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if x[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }
}

#[derive(Debug, Clone)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
}

impl RandomForest {
    /// Tree `t` draws its bootstrap sample and feature subsets from a stream
    /// seeded by `(seed, t)`, so the forest is the same however it is built.
    pub fn fit(
        data: &Dataset,
        n_trees: usize,
        bootstrap: bool,
        params: &TreeParams,
        seed: u64,
        execution: Execution,
    ) -> Self {
        let n = data.len();
        let trees = execution.map_range(n_trees.max(1), |t| {
            let tree_seed = seed::derive(seed, &[t as u64]);
            if !bootstrap {
                return DecisionTree::fit(data, params, tree_seed);
            }
            let mut rng = seed::rng(seed::derive(tree_seed, &[0xb007]));
            let idx: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
            DecisionTree::fit_indices(data, &idx, params, tree_seed)
        });
        Self { trees }
    }

    pub fn proba(&self, x: &[f64]) -> f64 {
        self.trees.iter().map(|t| t.proba(x)).sum::<f64>() / self.trees.len() as f64
    }

    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }
}
