//! Fixed inputs shared by the benchmarks.

use quadred::generate::odd_wheel_embedding;
use quadred::{gen_quadrangulation, SignedRotationSystem, Surface};

/// A seeded sphere quadrangulation with `n` vertices.
pub fn sphere(n: usize) -> SignedRotationSystem {
    gen_quadrangulation(Surface::Sphere, n, 7, false).expect("sphere sizes from 4 up are reachable")
}

/// A seeded non-bipartite projective quadrangulation with `n` vertices.
pub fn projective(n: usize) -> SignedRotationSystem {
    gen_quadrangulation(Surface::ProjectivePlane, n, 7, true).expect("projective sizes from 4 up are reachable")
}

/// The odd wheel with `2k + 1` rim vertices.
pub fn wheel(k: usize) -> SignedRotationSystem {
    odd_wheel_embedding(k)
}
