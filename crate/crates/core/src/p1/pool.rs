use crate::error::{Error, Result};
use crate::p1::poly::q;
use crate::Q;

/// Deterministic supply of "generic" rational constants.
///
/// By default this is 2, 3, 5, 7, ... (the primes). A seed list can be put in front; after the
/// seeds the primes continue, skipping values already seeded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantPool {
    values: Vec<i64>,
}

impl Default for ConstantPool {
    fn default() -> Self {
        ConstantPool::with_seeds(Vec::new())
    }
}

fn is_prime(n: i64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl ConstantPool {
    pub fn with_seeds(seeds: Vec<i64>) -> Self {
        let mut values = seeds;
        let mut p = 1;
        // enough for every search in this crate; `get` extends further on demand
        while values.len() < 512 {
            p += 1;
            if is_prime(p) && !values.contains(&p) {
                values.push(p);
            }
        }
        ConstantPool { values }
    }

    /// Parses a comma-separated list of integers, e.g. the value of `TROPLIFT_SEED_POOL`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut seeds = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let v: i64 = part
                .parse()
                .map_err(|_| Error::Malformed(format!("seed pool entry {:?} is not an integer", part)))?;
            if !seeds.contains(&v) {
                seeds.push(v);
            }
        }
        Ok(ConstantPool::with_seeds(seeds))
    }

    pub fn get(&self, i: usize) -> Q {
        if i < self.values.len() {
            return q(self.values[i]);
        }
        // rarely reached: continue with primes past the stored list
        let mut p = *self.values.iter().max().unwrap_or(&1);
        let mut k = self.values.len();
        loop {
            p += 1;
            if is_prime(p) && !self.values.contains(&p) {
                if k == i {
                    return q(p);
                }
                k += 1;
            }
        }
    }

    /// `count` consecutive constants starting at `start`, skipping any value in `avoid`.
    pub fn take_avoiding(&self, start: usize, count: usize, avoid: &[Q]) -> Vec<Q> {
        let mut out = Vec::with_capacity(count);
        let mut i = start;
        while out.len() < count {
            let c = self.get(i);
            if !avoid.contains(&c) && !out.contains(&c) {
                out.push(c);
            }
            i += 1;
        }
        out
    }
}
