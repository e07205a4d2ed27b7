use std::f64::consts::E;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemClass {
    PrefixMonotone,
    WeaklyMonotone,
    Dag,
}

/// Iteration budget from the expected-runtime bounds:
///
/// | class | standard | k variant |
/// |---|---|---|
/// | prefix, weak | `2ek²(k+1)n` | `ek(k+1)²n` |
/// | dag | `4ek²n²` | `2ek(k+1)n²` |
pub fn budget_for(class: ProblemClass, n: usize, k: usize, variant: super::Variant) -> u64 {
    let (n, k) = (n as f64, k as f64);
    let coef = match (class, variant) {
        (ProblemClass::Dag, super::Variant::Standard) => 4.0 * k * k * n * n,
        (ProblemClass::Dag, super::Variant::KVariant) => 2.0 * k * (k + 1.0) * n * n,
        (_, super::Variant::Standard) => 2.0 * k * k * (k + 1.0) * n,
        (_, super::Variant::KVariant) => k * (k + 1.0) * (k + 1.0) * n,
    };
    (coef * E).ceil() as u64
}
