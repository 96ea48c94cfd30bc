//! Vanishing of wheels by orientation-reversing symmetries.
//!
//! The k-wheel and the single-eta-path wheel both carry the dihedral action
//! on their cycle. Rotation and reflection are applied as explicit vertex and
//! edge permutations and their effect on the orientation is read off with
//! [`relabel_sign`]. For k = 2 the swap of the two parallel cycle edges is
//! tried as well.

use alloc::vec::Vec;

use crate::graph::{named, Graph};
use crate::orientation::{relabel_sign, Parity};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WheelShape {
    /// One theta path: the k-wheel.
    Theta,
    /// One eta path through internal vertices.
    Eta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    VanishesBySymmetry,
    Unknown,
}

pub fn wheel_graph(k: usize, shape: WheelShape) -> Graph {
    match shape {
        WheelShape::Theta => named::wheel(k),
        WheelShape::Eta => named::eta_wheel(k),
    }
}

/// The symmetries tried, as (vertex map, edge map, flips), for a wheel laid
/// out as in `named`: cycle vertices `0..k`, leaves `k..2k`, cycle edge `i`
/// from `i` to `i+1`, hair edge `k+i` from `i` to `k+i`.
pub fn generators(k: usize) -> Vec<(Vec<usize>, Vec<usize>, Vec<bool>)> {
    let mut out = Vec::new();
    let rot_v: Vec<usize> = (0..2 * k).map(|v| if v < k { (v + 1) % k } else { k + (v - k + 1) % k }).collect();
    let rot_e: Vec<usize> = (0..2 * k).map(|e| if e < k { (e + 1) % k } else { k + (e - k + 1) % k }).collect();
    out.push((rot_v, rot_e, alloc::vec![false; 2 * k]));
    let ref_v: Vec<usize> = (0..2 * k).map(|v| if v < k { (k - v) % k } else { k + (2 * k - v) % k }).collect();
    // Cycle edge i (i -> i+1) lands on the edge between -i-1 and -i, reversed.
    let ref_e: Vec<usize> = (0..2 * k).map(|e| if e < k { (2 * k - e - 1) % k } else { k + (2 * k - e) % k }).collect();
    let ref_f: Vec<bool> = (0..2 * k).map(|e| e < k).collect();
    out.push((ref_v, ref_e, ref_f));
    if k == 2 {
        out.push(((0..4).collect(), alloc::vec![1, 0, 2, 3], alloc::vec![true, true, false, false]));
    }
    out
}

/// Signs of the generators on the reference orientation.
pub fn generator_signs(k: usize, parity: Parity, shape: WheelShape) -> Vec<i8> {
    let g = wheel_graph(k, shape);
    generators(k)
        .iter()
        .map(|(v, e, f)| relabel_sign(&g, &g, parity, v, e, f).expect("wheel symmetry"))
        .collect()
}

pub fn wheel_vanishing_case(k: usize, parity: Parity, shape: WheelShape) -> Verdict {
    if generator_signs(k, parity, shape).contains(&-1) {
        Verdict::VanishesBySymmetry
    } else {
        Verdict::Unknown
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generators_are_automorphisms() {
        for k in 2..7 {
            for par in Parity::ALL {
                assert_eq!(generator_signs(k, par, WheelShape::Theta).len(), if k == 2 { 3 } else { 2 });
            }
        }
    }

    #[test]
    fn mixed_parity_pattern() {
        for k in 2..10 {
            let a = wheel_vanishing_case(k, Parity::new(false, true), WheelShape::Theta);
            assert_eq!(a == Verdict::VanishesBySymmetry, k % 4 != 1, "k={k}");
            let b = wheel_vanishing_case(k, Parity::new(true, false), WheelShape::Theta);
            assert_eq!(b == Verdict::VanishesBySymmetry, k % 4 != 3, "k={k}");
            let c = wheel_vanishing_case(k, Parity::new(true, false), WheelShape::Eta);
            assert_eq!(c == Verdict::VanishesBySymmetry, k % 4 != 1, "k={k}");
        }
    }
}
