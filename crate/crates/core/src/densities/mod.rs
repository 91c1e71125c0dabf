//! Root-count densities: splitting-type counts, the two moment routes, and
//! the conversion from factorial moments to probabilities.

mod genfun;
mod inversion;
mod polys;
mod recursive;
pub mod render;
mod splitting;
mod table;
mod verify;

pub use genfun::{compute_genfun_route, GeneratingSeries};
pub use inversion::{moments_to_probabilities, moments_to_star, star_to_moments};
pub use recursive::{alpha_tilde_from, compute_moment_tables_recursive, compute_moment_tables_with, compute_rho_table};
pub use splitting::{
    count_irreducible, count_splitting_type, enumerate_splitting_types, verify_euler_product,
    verify_euler_product_with, EulerProductCheck, SplittingCache, SplittingType,
};
pub use table::{DensityTable, Grid, Quantity, Route};
pub use polys::{assemble_generating_polynomials, GeneratingPolynomials};
pub use render::{entry_label, render_entries, render_polynomials, select, Entry, Format, Selection, SeriesKind};
pub use verify::{
    full_table, full_table_with, verify_all, verify_all_with, verify_large_p, verify_route_equivalence,
    verify_specializations, verify_identities, CheckResult, Report, SAMPLE_PRIMES,
};
