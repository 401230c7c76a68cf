//! Quantitative Kronecker localization: Fejér-kernel sums, minima of
//! integer linear forms, and explicit recurrence bounds for almost
//! periodic sums of exponentials.

pub mod bounds;
pub mod fejer;
pub mod lattice;
pub mod poly;
pub mod quad;
pub mod replay;
pub mod search;
pub mod verify;

/// Sets the number of worker threads for the parallel sweeps. Returns
/// `false` if the pool was already started or the `parallel` feature is off.
pub fn configure_workers(workers: usize) -> bool {
    #[cfg(feature = "parallel")]
    {
        rayon::ThreadPoolBuilder::new().num_threads(workers).build_global().is_ok()
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        false
    }
}
