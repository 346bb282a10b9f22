//! First-principles structure theory: Green's relations, their starred
//! analogues, regularity, abundance, and maximal subsemigroups.

mod greens;
mod maximal;
mod regularity;
mod starred;

pub use greens::{
    greens, partition_by_domain, partition_by_height, partition_by_image,
    partition_by_image_and_block_minima, partition_by_kernel, verify_imd_greens,
    verify_pd_greens, verify_pmd_greens, GreensRelations, Partition,
};
pub use maximal::{
    bracket_class, exhaustive_maximal_subsemigroups, is_maximal_subsemigroup,
    maximal_subsemigroups, verify_maximal, verify_maximal_catalog, BracketClass,
    CatalogEntry, MaximalSubsemigroupCatalog, WitnessKind,
};
pub use regularity::{
    idempotents, inverse_ideal_witness, regular_elements, verify_abundance,
    verify_regularity,
};
pub use starred::{starred_greens, verify_starred, StarredRelations};
