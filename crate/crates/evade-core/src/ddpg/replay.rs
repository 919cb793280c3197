//! Fixed-capacity experience replay with FIFO eviction.

use alloc::vec::Vec;

use rand::Rng;

use crate::env::Transition;

#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    storage: Vec<Transition>,
    capacity: usize,
    head: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        Self {
            storage: Vec::with_capacity(capacity),
            capacity,
            head: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.storage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.storage.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Appends a transition, overwriting the oldest one when full.
    pub fn push(&mut self, t: Transition) {
        if self.storage.len() < self.capacity {
            self.storage.push(t);
        } else {
            self.storage[self.head] = t;
            self.head = (self.head + 1) % self.capacity;
        }
    }

    /// Uniform sample of `batch_size` distinct transitions, or `None` while
    /// the buffer holds fewer than that.
    pub fn sample<R: Rng>(&self, batch_size: usize, rng: &mut R) -> Option<Vec<Transition>> {
        if self.storage.len() < batch_size {
            return None;
        }
        let picks = rand::seq::index::sample(rng, self.storage.len(), batch_size);
        Some(picks.iter().map(|i| self.storage[i]).collect())
    }

    #[cfg(any(test, feature = "test-oracles"))]
    pub fn iter(&self) -> impl Iterator<Item = &Transition> {
        self.storage.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{Action, EnvState};
    use crate::stats::special::gamma_p;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn marked(id: f64) -> Transition {
        Transition {
            state: EnvState {
                d_lon: id,
                ..EnvState::default()
            },
            action: Action::default(),
            reward: 0.0,
            next_state: EnvState::default(),
            terminal: false,
        }
    }

    #[test]
    fn fifo_eviction_keeps_newest() {
        let mut buf = ReplayBuffer::new(2);
        buf.push(marked(1.0));
        buf.push(marked(2.0));
        buf.push(marked(3.0));
        let mut ids: Vec<f64> = buf.iter().map(|t| t.state.d_lon).collect();
        ids.sort_by(f64::total_cmp);
        assert_eq!(ids, vec![2.0, 3.0]);
    }

    #[test]
    fn sample_of_everything_returns_everything() {
        let mut buf = ReplayBuffer::new(4);
        buf.push(marked(1.0));
        buf.push(marked(2.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let batch = buf.sample(2, &mut rng).unwrap();
        let mut ids: Vec<f64> = batch.iter().map(|t| t.state.d_lon).collect();
        ids.sort_by(f64::total_cmp);
        assert_eq!(ids, vec![1.0, 2.0]);
    }

    #[test]
    fn underfilled_buffer_defers_sampling() {
        let mut buf = ReplayBuffer::new(10);
        buf.push(marked(1.0));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(buf.sample(2, &mut rng).is_none());
    }

    #[test]
    fn sampling_is_uniform_chi_square() {
        let n_items = 50usize;
        let mut buf = ReplayBuffer::new(n_items);
        for i in 0..n_items {
            buf.push(marked(i as f64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        let mut counts = vec![0u64; n_items];
        let draws = 20_000;
        let per_draw = 5;
        for _ in 0..draws {
            for t in buf.sample(per_draw, &mut rng).unwrap() {
                counts[t.state.d_lon as usize] += 1;
            }
        }
        let total = (draws * per_draw) as f64;
        let expected = total / n_items as f64;
        let stat: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        let df = (n_items - 1) as f64;
        let p = 1.0 - gamma_p(df / 2.0, stat / 2.0);
        assert!(p > 0.01, "chi-square stat {stat}, p {p}");
    }
}
