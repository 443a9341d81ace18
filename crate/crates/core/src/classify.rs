//! Post-processing of binary classification labels: minimize label flips
//! subject to a kernel-smoothed minimum-exposure constraint while not
//! increasing the number of positive labels.

use crate::error::{Error, Result};
use crate::inequality::{partition_between_inequality, EntropyConfig, Kernel};

/// Exact-solver scale guard.
pub const MAX_EXACT_NODES: usize = 24;

/// Feasibility slack on the smoothed exposures.
pub const EXPOSURE_TOL: f64 = 1e-9;

/// One relabeling problem: predicted labels, the smoothing kernel, and the
/// minimum smoothed exposure every node must reach.
#[derive(Debug, Clone)]
pub struct RelabelInstance {
    y_hat: Vec<bool>,
    kernel: Kernel,
    theta_min: f64,
}

impl RelabelInstance {
    pub fn new(y_hat: Vec<bool>, kernel: Kernel, theta_min: f64) -> Result<Self> {
        if y_hat.len() != kernel.n() {
            return Err(Error::Dimension(format!(
                "labels ({}) and kernel ({}) disagree",
                y_hat.len(),
                kernel.n()
            )));
        }
        if !(0.0..=1.0).contains(&theta_min) {
            return Err(Error::Domain(format!(
                "theta_min must lie in [0, 1], got {theta_min}"
            )));
        }
        Ok(RelabelInstance {
            y_hat,
            kernel,
            theta_min,
        })
    }

    pub fn n(&self) -> usize {
        self.y_hat.len()
    }

    pub fn y_hat(&self) -> &[bool] {
        &self.y_hat
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn theta_min(&self) -> f64 {
        self.theta_min
    }

    fn positives(&self) -> usize {
        self.y_hat.iter().filter(|&&b| b).count()
    }

    /// Minimum smoothed exposure of a labeling under this kernel.
    pub fn min_exposure(&self, y: &[bool]) -> f64 {
        let matrix = self.kernel.matrix();
        let mut min = f64::INFINITY;
        for i in 0..self.n() {
            let num: f64 = (0..self.n())
                .filter(|&j| y[j])
                .map(|j| matrix[[i, j]])
                .sum();
            let den: f64 = matrix.row(i).sum();
            min = min.min(num / den);
        }
        min
    }

    /// Checks both constraints with the documented slack.
    pub fn is_feasible(&self, y: &[bool]) -> bool {
        let ones = y.iter().filter(|&&b| b).count();
        ones <= self.positives() && self.min_exposure(y) >= self.theta_min - EXPOSURE_TOL
    }
}

#[derive(Debug, Clone)]
pub struct RelabelResult {
    pub y_tilde: Vec<bool>,
    /// Hamming distance to the input labels.
    pub flips: usize,
    pub min_exposure_achieved: f64,
    /// True only when produced by the exact solver.
    pub optimal: bool,
}

/// Terminal state when no feasible labeling was produced. `proven` is true
/// when the exact solver exhausted the search space; the heuristic sets it
/// false and reports the best vector it saw.
#[derive(Debug, Clone)]
pub struct InfeasibleReport {
    pub best_y: Vec<bool>,
    pub best_min_exposure: f64,
    pub proven: bool,
}

#[derive(Debug, Clone)]
pub enum RelabelOutcome {
    Feasible(RelabelResult),
    Infeasible(InfeasibleReport),
}

impl RelabelOutcome {
    pub fn feasible(&self) -> Option<&RelabelResult> {
        match self {
            RelabelOutcome::Feasible(r) => Some(r),
            RelabelOutcome::Infeasible(_) => None,
        }
    }
}

fn hamming(a: &[bool], b: &[bool]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Depth-first branch-and-bound over the label vector, visiting values in
/// lexicographic order (0 before 1) so the first solution found at the
/// optimal flip count is the lexicographically smallest. Prunes on the
/// flip count, the positive-label budget, and a per-node upper bound on
/// the achievable exposure mass.
pub fn solve_exact(instance: &RelabelInstance) -> Result<RelabelOutcome> {
    let n = instance.n();
    if n > MAX_EXACT_NODES {
        return Err(Error::Invalid(format!(
            "exact solver is limited to {MAX_EXACT_NODES} nodes (got {n}); use solve_heuristic"
        )));
    }
    let matrix = instance.kernel.matrix();
    let row_sums = instance.kernel.row_sums();
    // Feasibility in mass form: sum_j K[i,j] y_j >= target[i].
    let target: Vec<f64> = (0..n)
        .map(|i| (instance.theta_min - EXPOSURE_TOL) * row_sums[i])
        .collect();
    // suffix[p][i] = sum_{j >= p} K[i, j]: the most mass positions >= p can add.
    let mut suffix = vec![vec![0.0; n]; n + 1];
    for p in (0..n).rev() {
        for i in 0..n {
            suffix[p][i] = suffix[p + 1][i] + matrix[[i, p]];
        }
    }
    let budget = instance.positives();

    struct Search<'a> {
        matrix: &'a ndarray::Array2<f64>,
        target: &'a [f64],
        suffix: &'a [Vec<f64>],
        y_hat: &'a [bool],
        budget: usize,
        n: usize,
        best: Option<(usize, Vec<bool>)>,
        current: Vec<bool>,
        mass: Vec<f64>,
    }

    impl Search<'_> {
        fn dfs(&mut self, pos: usize, flips: usize, ones: usize) {
            if let Some((best_flips, _)) = &self.best {
                if flips >= *best_flips {
                    return;
                }
            }
            if ones > self.budget {
                return;
            }
            // Even assigning 1 everywhere ahead cannot lift node i to target.
            for i in 0..self.n {
                if self.mass[i] + self.suffix[pos][i] < self.target[i] - 1e-12 {
                    return;
                }
            }
            if pos == self.n {
                self.best = Some((flips, self.current.clone()));
                return;
            }
            for value in [false, true] {
                let flip = usize::from(value != self.y_hat[pos]);
                self.current[pos] = value;
                if value {
                    for i in 0..self.n {
                        self.mass[i] += self.matrix[[i, pos]];
                    }
                }
                self.dfs(pos + 1, flips + flip, ones + usize::from(value));
                if value {
                    for i in 0..self.n {
                        self.mass[i] -= self.matrix[[i, pos]];
                    }
                }
            }
            self.current[pos] = false;
        }
    }

    let mut search = Search {
        matrix,
        target: &target,
        suffix: &suffix,
        y_hat: &instance.y_hat,
        budget,
        n,
        best: None,
        current: vec![false; n],
        mass: vec![0.0; n],
    };
    search.dfs(0, 0, 0);

    match search.best {
        Some((flips, y)) => {
            let min_exposure = instance.min_exposure(&y);
            debug_assert!(instance.is_feasible(&y));
            Ok(RelabelOutcome::Feasible(RelabelResult {
                flips,
                min_exposure_achieved: min_exposure,
                y_tilde: y,
                optimal: true,
            }))
        }
        None => {
            let best_min = instance.min_exposure(&instance.y_hat);
            Ok(RelabelOutcome::Infeasible(InfeasibleReport {
                best_y: instance.y_hat.clone(),
                best_min_exposure: best_min,
                proven: true,
            }))
        }
    }
}

/// Greedy paired-swap repair: while the minimum smoothed exposure misses
/// `theta_min`, flip the 0-to-1 candidate that most raises the minimum,
/// paired with the 1-to-0 candidate that least lowers it (conserving the
/// positive count), giving up after n^2/2 swaps. When that stalls,
/// escalations run in turn: joint leximin pair selection, a constructive
/// restart (rebuild the positive set greedily for the maximin exposure,
/// then polish), and, at exact-solver scale, a complete feasibility
/// search. Results are verified against the constraints; `optimal` is
/// always false.
pub fn solve_heuristic(instance: &RelabelInstance) -> Result<RelabelOutcome> {
    if instance.is_feasible(&instance.y_hat) {
        return Ok(RelabelOutcome::Feasible(RelabelResult {
            y_tilde: instance.y_hat.clone(),
            flips: 0,
            min_exposure_achieved: instance.min_exposure(&instance.y_hat),
            optimal: false,
        }));
    }

    let mut attempts: Vec<(Option<Vec<bool>>, Vec<bool>)> = Vec::new();
    attempts.push(run_repair(
        instance,
        &instance.y_hat,
        PairSelection::Sequential,
    ));
    if attempts.last().unwrap().0.is_none() {
        attempts.push(run_repair(instance, &instance.y_hat, PairSelection::Joint));
    }
    if attempts.last().unwrap().0.is_none() {
        let constructed = construct_maximin(instance);
        attempts.push(run_repair(instance, &constructed, PairSelection::Joint));
    }
    // Swap neighborhoods have genuine local optima (feasible sets can sit
    // several exchanges away); at exact-solver scale a complete
    // feasibility search closes the gap.
    if attempts.last().unwrap().0.is_none() && instance.n() <= MAX_EXACT_NODES {
        let found = feasibility_dfs(instance);
        if let Some(y) = found {
            attempts.push((Some(y.clone()), y));
        }
    }

    if let Some(y) = attempts.iter().find_map(|(done, _)| done.clone()) {
        debug_assert!(instance.is_feasible(&y));
        return Ok(RelabelOutcome::Feasible(RelabelResult {
            flips: hamming(&y, &instance.y_hat),
            min_exposure_achieved: instance.min_exposure(&y),
            y_tilde: y,
            optimal: false,
        }));
    }

    let best = attempts
        .into_iter()
        .map(|(_, best)| best)
        .max_by(|a, b| {
            instance
                .min_exposure(a)
                .partial_cmp(&instance.min_exposure(b))
                .unwrap()
        })
        .expect("at least one attempt ran");
    let value = instance.min_exposure(&best);
    Ok(RelabelOutcome::Infeasible(InfeasibleReport {
        best_y: best,
        best_min_exposure: value,
        proven: false,
    }))
}

/// Depth-first search for any feasible labeling, branching on keeping the
/// input label first, with the same mass-bound pruning as the exact
/// solver. Returns the first feasible labeling found.
fn feasibility_dfs(instance: &RelabelInstance) -> Option<Vec<bool>> {
    let n = instance.n();
    let matrix = instance.kernel.matrix();
    let row_sums = instance.kernel.row_sums();
    let target: Vec<f64> = (0..n)
        .map(|i| (instance.theta_min - EXPOSURE_TOL) * row_sums[i])
        .collect();
    let mut suffix = vec![vec![0.0; n]; n + 1];
    for p in (0..n).rev() {
        for i in 0..n {
            suffix[p][i] = suffix[p + 1][i] + matrix[[i, p]];
        }
    }
    let budget = instance.positives();

    fn dfs(
        pos: usize,
        ones: usize,
        matrix: &ndarray::Array2<f64>,
        target: &[f64],
        suffix: &[Vec<f64>],
        y_hat: &[bool],
        budget: usize,
        n: usize,
        current: &mut Vec<bool>,
        mass: &mut Vec<f64>,
    ) -> bool {
        if ones > budget {
            return false;
        }
        for i in 0..n {
            if mass[i] + suffix[pos][i] < target[i] - 1e-12 {
                return false;
            }
        }
        if pos == n {
            return true;
        }
        for value in [y_hat[pos], !y_hat[pos]] {
            current[pos] = value;
            if value {
                for i in 0..n {
                    mass[i] += matrix[[i, pos]];
                }
            }
            if dfs(
                pos + 1,
                ones + usize::from(value),
                matrix,
                target,
                suffix,
                y_hat,
                budget,
                n,
                current,
                mass,
            ) {
                return true;
            }
            if value {
                for i in 0..n {
                    mass[i] -= matrix[[i, pos]];
                }
            }
        }
        current[pos] = false;
        false
    }

    let mut current = vec![false; n];
    let mut mass = vec![0.0; n];
    if dfs(
        0,
        0,
        matrix,
        &target,
        &suffix,
        &instance.y_hat,
        budget,
        n,
        &mut current,
        &mut mass,
    ) {
        Some(current)
    } else {
        None
    }
}

/// Rebuilds a positive set of the same size from scratch, adding at each
/// step the node that maximizes the resulting minimum smoothed exposure
/// (ties toward the smallest id).
fn construct_maximin(instance: &RelabelInstance) -> Vec<bool> {
    let n = instance.n();
    let matrix = instance.kernel.matrix();
    let row_sums = instance.kernel.row_sums().to_vec();
    let budget = instance.positives();
    let mut y = vec![false; n];
    let mut mass = vec![0.0; n];
    for _ in 0..budget {
        let mut chosen = None;
        let mut best = f64::NEG_INFINITY;
        for j in 0..n {
            if y[j] {
                continue;
            }
            let value = (0..n)
                .map(|i| (mass[i] + matrix[[i, j]]) / row_sums[i])
                .fold(f64::INFINITY, f64::min);
            if value > best {
                best = value;
                chosen = Some(j);
            }
        }
        let Some(j) = chosen else { break };
        y[j] = true;
        for i in 0..n {
            mass[i] += matrix[[i, j]];
        }
    }
    y
}

#[derive(Clone, Copy, PartialEq)]
enum PairSelection {
    /// Pick the incoming flip first, then the least damaging outgoing flip.
    Sequential,
    /// Leximin hill-climbing over all (incoming, outgoing) pairs: compare
    /// sorted exposure vectors and apply only strict improvements, so the
    /// walk cannot cycle.
    Joint,
}

fn min_ratio(mass: &[f64], row_sums: &[f64]) -> f64 {
    mass.iter()
        .zip(row_sums)
        .map(|(m, r)| m / r)
        .fold(f64::INFINITY, f64::min)
}

fn sorted_ratios(mass: &[f64], row_sums: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = mass.iter().zip(row_sums).map(|(m, r)| m / r).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

/// Lexicographic comparison of ascending-sorted exposure vectors; `a > b`
/// means `a` leximin-dominates `b`.
fn leximin_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap() {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    std::cmp::Ordering::Equal
}

/// Returns (feasible labeling if reached, best labeling seen).
fn run_repair(
    instance: &RelabelInstance,
    start: &[bool],
    mode: PairSelection,
) -> (Option<Vec<bool>>, Vec<bool>) {
    let n = instance.n();
    let matrix = instance.kernel.matrix();
    let row_sums = instance.kernel.row_sums().to_vec();
    let threshold = instance.theta_min - EXPOSURE_TOL;
    let mut y = start.to_vec();
    let mut mass: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| y[j]).map(|j| matrix[[i, j]]).sum())
        .collect();
    let mut best = (min_ratio(&mass, &row_sums), y.clone());
    if best.0 >= threshold {
        return (Some(y), best.1);
    }

    let evaluate = |jin: usize, jout: usize, mass: &[f64]| -> f64 {
        (0..n)
            .map(|i| (mass[i] + matrix[[i, jin]] - matrix[[i, jout]]) / row_sums[i])
            .fold(f64::INFINITY, f64::min)
    };

    let budget = (n * n) / 2;
    for _ in 0..budget {
        let ones: Vec<usize> = (0..n).filter(|&j| y[j]).collect();
        let zeros: Vec<usize> = (0..n).filter(|&j| !y[j]).collect();
        if ones.is_empty() || zeros.is_empty() {
            break;
        }

        let pair = match mode {
            PairSelection::Sequential => {
                let interim = |j: usize| {
                    (0..n)
                        .map(|i| (mass[i] + matrix[[i, j]]) / row_sums[i])
                        .fold(f64::INFINITY, f64::min)
                };
                // Ties break toward the smallest node id.
                let jin = *zeros
                    .iter()
                    .max_by(|&&a, &&b| interim(a).partial_cmp(&interim(b)).unwrap().then(b.cmp(&a)))
                    .unwrap();
                ones.iter()
                    .filter(|&&l| l != jin)
                    .max_by(|&&a, &&b| {
                        evaluate(jin, a, &mass)
                            .partial_cmp(&evaluate(jin, b, &mass))
                            .unwrap()
                            .then(b.cmp(&a))
                    })
                    .map(|&jout| (jin, jout))
            }
            PairSelection::Joint => {
                let current = sorted_ratios(&mass, &row_sums);
                let mut chosen = None;
                let mut best_vector = current.clone();
                for &jin in &zeros {
                    for &jout in &ones {
                        if jin == jout {
                            continue;
                        }
                        let trial: Vec<f64> = (0..n)
                            .map(|i| mass[i] + matrix[[i, jin]] - matrix[[i, jout]])
                            .collect();
                        let trial = sorted_ratios(&trial, &row_sums);
                        if leximin_cmp(&trial, &best_vector) == std::cmp::Ordering::Greater {
                            best_vector = trial;
                            chosen = Some((jin, jout));
                        }
                    }
                }
                // None means a leximin-local optimum: stop instead of cycling.
                chosen
            }
        };
        let Some((jin, jout)) = pair else { break };

        y[jin] = true;
        y[jout] = false;
        for i in 0..n {
            mass[i] += matrix[[i, jin]] - matrix[[i, jout]];
        }
        let value = min_ratio(&mass, &row_sums);
        if value > best.0 {
            best = (value, y.clone());
        }
        if value >= threshold {
            return (Some(y), best.1);
        }
    }
    (None, best.1)
}

/// Ground-truth evaluation of a relabeling.
#[derive(Debug, Clone)]
pub struct RelabelReport {
    pub delta0_before: f64,
    pub delta0_after: f64,
    pub flip_fraction: f64,
}

/// Partition-based between-group inequality of the positive-label
/// allocation before and after post-processing, plus the flipped fraction.
pub fn evaluate_relabel(
    y_hat: &[bool],
    y_tilde: &[bool],
    labels: &[usize],
    cfg: &EntropyConfig,
) -> Result<RelabelReport> {
    if y_hat.len() != y_tilde.len() || y_hat.len() != labels.len() {
        return Err(Error::Dimension(
            "labelings and groups differ in length".into(),
        ));
    }
    let to_f64 = |y: &[bool]| -> Vec<f64> { y.iter().map(|&b| f64::from(u8::from(b))).collect() };
    let delta0_before = partition_between_inequality(&to_f64(y_hat), labels, cfg)?;
    let delta0_after = partition_between_inequality(&to_f64(y_tilde), labels, cfg)?;
    Ok(RelabelReport {
        delta0_before,
        delta0_after,
        flip_fraction: hamming(y_hat, y_tilde) as f64 / y_hat.len() as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequality::ground_truth_kernel;
    use ndarray::Array2;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_column_normalized(n: usize, rng: &mut ChaCha8Rng) -> Kernel {
        let mut m = Array2::zeros((n, n));
        for j in 0..n {
            let mut col: Vec<f64> = (0..n).map(|_| rng.random::<f64>() + 0.01).collect();
            let s: f64 = col.iter().sum();
            for v in &mut col {
                *v /= s;
            }
            for i in 0..n {
                m[[i, j]] = col[i];
            }
        }
        Kernel::new(m).unwrap()
    }

    /// Exhaustive oracle over all 2^n labelings.
    fn brute_force(instance: &RelabelInstance) -> Option<(usize, Vec<bool>)> {
        let n = instance.n();
        let mut best: Option<(usize, Vec<bool>)> = None;
        for mask in 0..(1u32 << n) {
            let y: Vec<bool> = (0..n).map(|j| mask >> j & 1 == 1).collect();
            if !instance.is_feasible(&y) {
                continue;
            }
            let flips = hamming(&y, instance.y_hat());
            let better = match &best {
                None => true,
                Some((bf, _)) => flips < *bf,
            };
            if better {
                best = Some((flips, y));
            }
        }
        best
    }

    #[test]
    fn zero_threshold_keeps_labels() {
        let kernel = ground_truth_kernel(&[0, 0, 1, 1]).unwrap();
        let instance = RelabelInstance::new(vec![true, true, false, false], kernel, 0.0).unwrap();
        let exact = solve_exact(&instance).unwrap();
        let r = exact.feasible().expect("theta 0 is always feasible");
        assert_eq!(r.flips, 0);
        assert_eq!(r.y_tilde, instance.y_hat());
        let heur = solve_heuristic(&instance).unwrap();
        assert_eq!(heur.feasible().unwrap().flips, 0);
    }

    #[test]
    fn two_group_swap_needs_two_flips() {
        // All positives in group one; theta 0.5 forces one positive into
        // group two paired with one removal, verified exhaustively.
        let kernel = ground_truth_kernel(&[0, 0, 1, 1]).unwrap();
        let instance = RelabelInstance::new(vec![true, true, false, false], kernel, 0.5).unwrap();
        let exact = solve_exact(&instance).unwrap();
        let r = exact.feasible().unwrap();
        assert_eq!(r.flips, 2);
        let (oracle_flips, _) = brute_force(&instance).unwrap();
        assert_eq!(oracle_flips, 2);
        // Lexicographically smallest optimum: flip node 0 off, node 3 on.
        assert_eq!(r.y_tilde, vec![false, true, false, true]);
        assert!(r.min_exposure_achieved >= 0.5 - EXPOSURE_TOL);
        assert!(r.optimal);
    }

    #[test]
    fn conservation_makes_high_thresholds_infeasible() {
        // All-ones kernel: every exposure equals the positive fraction,
        // which conservation caps at 1/2.
        let ones = Kernel::new(Array2::from_elem((4, 4), 0.25)).unwrap();
        let instance = RelabelInstance::new(vec![true, false, true, false], ones, 0.75).unwrap();
        match solve_exact(&instance).unwrap() {
            RelabelOutcome::Infeasible(report) => assert!(report.proven),
            RelabelOutcome::Feasible(_) => panic!("should be infeasible"),
        }
    }

    #[test]
    fn oversize_instance_names_the_heuristic() {
        let n = MAX_EXACT_NODES + 1;
        let kernel = Kernel::identity(n);
        let instance = RelabelInstance::new(vec![false; n], kernel, 0.0).unwrap();
        let err = solve_exact(&instance).unwrap_err();
        assert!(err.to_string().contains("solve_heuristic"));
    }

    #[test]
    fn exact_matches_brute_force_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..60 {
            let n = 4 + (trial % 7);
            let kernel = random_column_normalized(n, &mut rng);
            let y_hat: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.5).collect();
            let theta = rng.random::<f64>() * 0.9;
            let instance = RelabelInstance::new(y_hat, kernel, theta).unwrap();

            let oracle = brute_force(&instance);
            match (solve_exact(&instance).unwrap(), oracle) {
                (RelabelOutcome::Feasible(r), Some((flips, _))) => {
                    assert_eq!(r.flips, flips, "trial {trial}");
                }
                (RelabelOutcome::Infeasible(rep), None) => assert!(rep.proven),
                (got, oracle) => {
                    panic!("trial {trial}: solver and oracle disagree: {got:?} vs {oracle:?}")
                }
            }
        }
    }

    #[test]
    fn heuristic_matches_exact_feasibility_and_never_beats_it() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for trial in 0..60 {
            let n = 4 + (trial % 9);
            let kernel = random_column_normalized(n, &mut rng);
            let y_hat: Vec<bool> = (0..n).map(|_| rng.random::<f64>() < 0.5).collect();
            let theta = rng.random::<f64>() * 0.9;
            let instance = RelabelInstance::new(y_hat, kernel, theta).unwrap();

            let exact = solve_exact(&instance).unwrap();
            let heuristic = solve_heuristic(&instance).unwrap();
            match (&exact, &heuristic) {
                (RelabelOutcome::Feasible(e), RelabelOutcome::Feasible(h)) => {
                    assert!(h.flips >= e.flips, "trial {trial}");
                    assert!(instance.is_feasible(&h.y_tilde));
                    assert!(!h.optimal);
                }
                (RelabelOutcome::Infeasible(_), RelabelOutcome::Infeasible(_)) => {}
                (RelabelOutcome::Infeasible(_), RelabelOutcome::Feasible(h)) => {
                    panic!(
                        "trial {trial}: heuristic claims feasible where exact proves infeasible \
                         (min exposure {})",
                        h.min_exposure_achieved
                    );
                }
                (RelabelOutcome::Feasible(_), RelabelOutcome::Infeasible(rep)) => {
                    panic!(
                        "trial {trial}: heuristic failed a feasible instance (best {})",
                        rep.best_min_exposure
                    );
                }
            }
        }
    }

    #[test]
    fn optimal_flips_monotone_in_theta() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let kernel = random_column_normalized(8, &mut rng);
        let y_hat: Vec<bool> = (0..8).map(|i| i % 2 == 0).collect();
        let mut last = 0usize;
        for step in 0..10 {
            let theta = step as f64 * 0.05;
            let instance = RelabelInstance::new(y_hat.clone(), kernel.clone(), theta).unwrap();
            match solve_exact(&instance).unwrap() {
                RelabelOutcome::Feasible(r) => {
                    assert!(r.flips >= last, "flips dropped at theta {theta}");
                    last = r.flips;
                }
                RelabelOutcome::Infeasible(_) => break,
            }
        }
    }

    #[test]
    fn evaluate_relabel_reports_identity_and_improvement() {
        let labels = [0usize, 0, 1, 1];
        let y = [true, true, false, false];
        let cfg = EntropyConfig::generalized(2.0);
        let same = evaluate_relabel(&y, &y, &labels, &cfg).unwrap();
        assert_eq!(same.delta0_before, same.delta0_after);
        assert_eq!(same.flip_fraction, 0.0);

        let relabeled = [true, false, true, false];
        let moved = evaluate_relabel(&y, &relabeled, &labels, &cfg).unwrap();
        assert!(moved.delta0_after < moved.delta0_before);
        assert_eq!(moved.flip_fraction, 0.5);
    }

    #[test]
    fn one_sided_labels_over_sbm_improve_after_repair() {
        use crate::graph::{sbm_sample, SbmParams};
        use crate::kernel::{cosine_kernel, laplacian_eigenmaps, KernelConfig};

        let mut improved = 0;
        for seed in 0..10 {
            let params = SbmParams::homophilous(vec![15, 15], 0.5, 0.05, seed).unwrap();
            let g = sbm_sample(&params).unwrap();
            let labels = g.labels_dense().unwrap();
            let kernel =
                cosine_kernel(&laplacian_eigenmaps(&g, &KernelConfig::new(2)).unwrap()).unwrap();
            let y_hat: Vec<bool> = labels.iter().map(|&l| l == 0).collect();
            let instance = RelabelInstance::new(y_hat.clone(), kernel, 0.2).unwrap();
            if let RelabelOutcome::Feasible(r) = solve_heuristic(&instance).unwrap() {
                let report = evaluate_relabel(
                    &y_hat,
                    &r.y_tilde,
                    &labels,
                    &EntropyConfig::generalized(2.0),
                )
                .unwrap();
                if report.delta0_after < report.delta0_before {
                    improved += 1;
                }
            }
        }
        assert!(improved >= 8, "only {improved}/10 seeds improved");
    }
}
