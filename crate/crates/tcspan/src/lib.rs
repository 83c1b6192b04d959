//! Sparse temporal spanners of simply labeled temporal cliques.
//!
//! A temporal clique is a complete graph whose edges carry integer time
//! labels; a journey is a path that uses strictly increasing labels. This
//! crate builds small subsets of edges that preserve temporal connectivity:
//! pivot spanners (2(n-1) edges when a pivot vertex exists), dismounting
//! (2n-3 edges when the instance is 1-hop dismountable), fireworks covers
//! (about three quarters of the edges, or n^2/4 + 2n bidirectionally), and a
//! recursive pipeline that always lands under 4n ceil(log2 n) + 14n edges.
//! A brute-force oracle, instance generators, and reachability primitives
//! round out the toolkit; the `tcspan` binary drives everything from files.

pub mod basic;
pub mod core;
pub mod dismount;
pub mod fireworks;
pub mod gen;
pub mod layered;
pub mod oracle;
pub mod pipeline;
pub mod reach;
pub mod reduce;
