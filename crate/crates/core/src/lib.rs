pub mod dynamics;
pub mod eigen;
pub mod error;
pub mod game;
pub mod generate;
pub mod graph;
pub mod io;
pub mod logit;
pub mod rational;

pub use error::{Error, Result};
pub use game::{OpinionGame, Profile, Strategy};
pub use graph::SocialGraph;
pub use rational::Rational;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/equilibria.md")]
    mod equilibria {}
    #[doc = include_str!("../../../book/src/best_response.md")]
    mod best_response {}
    #[doc = include_str!("../../../book/src/cutwidth.md")]
    mod cutwidth {}
    #[doc = include_str!("../../../book/src/logit.md")]
    mod logit {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/xlab.md")]
    mod xlab {}
}
