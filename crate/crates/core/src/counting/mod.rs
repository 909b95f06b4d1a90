//! Copy enumeration and the counting families built on it.

pub mod base;
pub mod copies;
pub mod embed;
pub mod extension;

pub use base::{
    adversarial_t_search, base_graph, check_t, rho_d_dense_check, DenseMode, DenseVerdict,
    TSearchResult, TVerdict,
};
pub use copies::{
    count_f_minus, count_f_minus_through, enumerate_copies, enumerate_p, f_minus_members,
    f_minus_two_members, Anchor, CopyFamily, PFamily, PPair, SubCopy,
};
pub use extension::extension_count;
