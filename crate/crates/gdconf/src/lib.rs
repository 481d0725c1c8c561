//! Exact symbolic computation for Gel'fand–Dorfman algebras and their
//! quadratic Lie conformal algebras.
//!
//! The crate builds L(V) from a finite-dimensional Gel'fand–Dorfman
//! algebra V (a Novikov product and a Lie bracket tied by a
//! compatibility law), embeds it into conformal endomorphism operators
//! over a differential Poisson envelope of V, and certifies the
//! structural facts about that embedding — zero bracket residuals,
//! locality bounds, independence and dependence of operator images, and
//! ideal-membership certificates — entirely over ℚ, with no floating
//! point and no truncation silently hidden: every bounded computation
//! reports when a bound was hit.
//!
//! Start with [`finite::GDAlgebra`] for the finite data,
//! [`conformal`] for λ-brackets on L(V), [`poisson`] for envelopes,
//! and [`envelope::EmbeddingContext`] for the embedding machinery.

pub mod cend;
pub mod conformal;
pub mod envelope;
pub mod finite;
pub mod linalg;
pub mod mpoly;
pub mod parse;
pub mod poisson;
pub mod rational;
pub mod report;
pub mod vir;
pub mod weyl;

/// Compile the guide's code snippets as doctests so the book cannot
/// drift from the library.
#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(gd_algebras, "../../../book/src/gd-algebras.md");
    chapter!(conformal_brackets, "../../../book/src/conformal-brackets.md");
    chapter!(envelopes, "../../../book/src/envelopes.md");
    chapter!(embedding, "../../../book/src/embedding.md");
    chapter!(virasoro_envelope, "../../../book/src/virasoro-envelope.md");
    chapter!(kernel_and_ideals, "../../../book/src/kernel-and-ideals.md");
    chapter!(cli, "../../../book/src/cli.md");
}
