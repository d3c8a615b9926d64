use std::hash::{DefaultHasher, Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ExperimentError;
use crate::payment::{PaymentRequest, Sat};

/// What to draw: `per_epoch` payments among `nodes` nodes with amounts picked
/// uniformly from `amounts`.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkloadSpec {
    pub nodes: usize,
    pub per_epoch: usize,
    pub amounts: Vec<Sat>,
    pub seed: u64,
}

/// Epoch-ordered payment requests. Senders are uniform over all nodes and
/// receivers uniform over the rest.
pub fn generate_workload(
    spec: &WorkloadSpec,
    epochs: usize,
) -> Result<Vec<PaymentRequest>, ExperimentError> {
    if spec.nodes < 2 {
        return Err(ExperimentError::Config(format!(
            "workload needs at least 2 nodes, got {}",
            spec.nodes
        )));
    }
    if epochs == 0 {
        return Err(ExperimentError::Config(
            "workload needs at least one epoch".into(),
        ));
    }
    if spec.amounts.is_empty() || spec.amounts.contains(&0) {
        return Err(ExperimentError::Config(
            "amount list must be non-empty and positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(epochs * spec.per_epoch);
    for epoch in 0..epochs {
        for _ in 0..spec.per_epoch {
            let sender = rng.random_range(0..spec.nodes);
            let mut receiver = rng.random_range(0..spec.nodes - 1);
            if receiver >= sender {
                receiver += 1;
            }
            let amount = spec.amounts[rng.random_range(0..spec.amounts.len())];
            out.push(PaymentRequest {
                epoch,
                sender,
                receiver,
                amount,
            });
        }
    }
    Ok(out)
}

/// Order-sensitive hash of a request list.
pub fn workload_digest(reqs: &[PaymentRequest]) -> u64 {
    let mut h = DefaultHasher::new();
    reqs.hash(&mut h);
    h.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::payment::DEFAULT_AMOUNTS;

    fn spec(nodes: usize, per_epoch: usize, seed: u64) -> WorkloadSpec {
        WorkloadSpec {
            nodes,
            per_epoch,
            amounts: DEFAULT_AMOUNTS.to_vec(),
            seed,
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = generate_workload(&spec(100, 50, 9), 36).unwrap();
        let b = generate_workload(&spec(100, 50, 9), 36).unwrap();
        assert_eq!(a, b);
        assert_ne!(
            workload_digest(&a),
            workload_digest(&generate_workload(&spec(100, 50, 10), 36).unwrap())
        );
    }

    #[test]
    fn request_count_and_shape() {
        let w = generate_workload(&spec(100, 100, 1), 36).unwrap();
        assert_eq!(w.len(), 3600);
        assert!(w
            .iter()
            .all(|r| r.sender != r.receiver && r.sender < 100 && r.receiver < 100));
        assert!(w.windows(2).all(|p| p[0].epoch <= p[1].epoch));
        assert_eq!(w.iter().filter(|r| r.epoch == 35).count(), 100);
    }

    #[test]
    fn amounts_are_uniform() {
        let w = generate_workload(&spec(10, 100_000, 5), 1).unwrap();
        for a in DEFAULT_AMOUNTS {
            let share = w.iter().filter(|r| r.amount == a).count() as f64 / w.len() as f64;
            assert!((share - 1.0 / 6.0).abs() < 0.02, "amount {a}: {share}");
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(generate_workload(&spec(1, 5, 0), 3).is_err());
        assert!(generate_workload(&spec(5, 5, 0), 0).is_err());
        let empty = WorkloadSpec {
            amounts: vec![],
            ..spec(5, 5, 0)
        };
        assert!(generate_workload(&empty, 1).is_err());
    }

    #[test]
    fn zero_payments_per_epoch() {
        assert!(generate_workload(&spec(5, 0, 0), 4).unwrap().is_empty());
    }
}
