//! Choquet integral of a simple function, by sorting.
//!
//! This is the reference value for the generalized integral with Lebesgue
//! measure on the level axis. It deliberately shares no code with the
//! survival-function pipeline.

use alloc::vec::Vec;

use num_traits::Zero;

use crate::capacity::{Capacity, Subset};
use crate::rational::Q;

/// `sum_i (f_(i) - f_(i-1)) * mu({(i), .., (k)})` over the points of `a`
/// sorted by increasing `f`, with `f_(0) = 0`.
pub fn choquet(f: &[Q], mu: &Capacity, a: Subset) -> Q {
    let mut order: Vec<usize> = a.indices().filter(|&i| i < f.len()).collect();
    order.sort_by(|&i, &j| f[i].cmp(&f[j]));
    let mut upper = a;
    let mut prev = Q::zero();
    let mut total = Q::zero();
    for &i in &order {
        let step = &f[i] - &prev;
        if !step.is_zero() {
            total += step * mu.at(upper);
        }
        prev = f[i].clone();
        upper = upper.difference(Subset::singleton(i));
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capacity::GroundSpace;
    use crate::rational::{q, qi};
    use alloc::vec;

    fn mu3() -> Capacity {
        // mu(S) = 1, mu({1,2}) = 7/10, mu({2}) = 1/2, monotone completion elsewhere
        let vals = [(0b001, q(1, 5)), (0b010, q(1, 5)), (0b100, q(1, 2)), (0b011, q(2, 5)), (0b101, q(3, 5)), (0b110, q(7, 10)), (0b111, qi(1))];
        Capacity::from_fn(GroundSpace::new(3).unwrap(), |b| vals.iter().find(|(m, _)| *m == b.0).unwrap().1.clone()).unwrap()
    }

    #[test]
    fn sorted_levels() {
        let f = [qi(1), qi(2), qi(3)];
        assert_eq!(choquet(&f, &mu3(), Subset(0b111)), q(11, 5));
    }

    #[test]
    fn constant_function() {
        let f = vec![q(3, 2); 3];
        assert_eq!(choquet(&f, &mu3(), Subset(0b111)), q(3, 2));
        assert_eq!(choquet(&f, &mu3(), Subset(0b110)), q(3, 2) * q(7, 10));
        assert_eq!(choquet(&f, &mu3(), Subset::EMPTY), Q::zero());
    }

    #[test]
    fn additive_is_weighted_sum() {
        let masses = vec![q(1, 3), q(1, 6), q(1, 2)];
        let mu = Capacity::additive(GroundSpace::new(3).unwrap(), &masses).unwrap();
        let f = [qi(4), qi(0), q(2, 3)];
        let expected: Q = f.iter().zip(&masses).map(|(a, b)| a * b).sum();
        assert_eq!(choquet(&f, &mu, Subset(0b111)), expected);
    }
}
