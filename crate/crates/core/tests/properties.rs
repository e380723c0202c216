mod oracle;

use opinion_games::dynamics::{run_best_response, Scheduler};
use opinion_games::generate::RandomGame;
use opinion_games::io::{parse_game, write_game};
use opinion_games::logit::{canonical_path, LogitChain};
use opinion_games::{OpinionGame, Profile};
use oracle::Game;
use proptest::prelude::*;

fn game_strategy(max_n: usize) -> impl Strategy<Value = OpinionGame> {
    (
        2..=max_n,
        0.1f64..0.9,
        0u32..3,
        1u32..4,
        0u32..3,
        any::<u64>(),
    )
        .prop_map(
            |(n, edge_prob, weight_digits, max_weight, belief_digits, seed)| {
                RandomGame {
                    n,
                    edge_prob,
                    weight_digits,
                    max_weight,
                    belief_digits,
                }
                .generate(seed)
                .unwrap()
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cut_is_symmetric_under_complement(game in game_strategy(9), x in any::<u64>()) {
        let g = game.graph();
        let set = x & g.full_mask();
        prop_assert_eq!(g.cut_weight(set), g.cut_weight(!set & g.full_mask()));
        prop_assert_eq!(game.discord(Profile(set)), Game::of(&game).cut(set));
    }

    #[test]
    fn potential_tracks_every_deviation(game in game_strategy(9), x in any::<u64>(), i in 0usize..9) {
        let x = Profile(x & game.graph().full_mask());
        let i = i % game.n();
        let y = x.flip(i);
        prop_assert_eq!(
            game.potential(y) - game.potential(x),
            game.cost(y, i) - game.cost(x, i)
        );
    }

    #[test]
    fn files_round_trip(game in game_strategy(9)) {
        let text = write_game(&game);
        let back = parse_game(&text).unwrap();
        prop_assert_eq!(back.graph(), game.graph());
        prop_assert_eq!(back.beliefs(), game.beliefs());
    }

    #[test]
    fn canonical_beliefs_keep_best_responses(game in game_strategy(8)) {
        let canon = game.canonicalize_beliefs().unwrap();
        for x in 0..1u64 << game.n() {
            for i in 0..game.n() {
                prop_assert_eq!(
                    canon.best_responses(Profile(x), i),
                    game.best_responses(Profile(x), i)
                );
            }
        }
        let again = canon.canonicalize_beliefs().unwrap();
        prop_assert_eq!(again.beliefs(), canon.beliefs());
    }

    #[test]
    fn best_response_runs_end_in_equilibria(game in game_strategy(10), start in any::<u64>(), seed in any::<u64>()) {
        let start = Profile(start & game.graph().full_mask());
        let trace = run_best_response(&game, start, &Scheduler::UniformRandom { seed }, 1_000_000).unwrap();
        prop_assert!(trace.converged);
        prop_assert!(game.is_nash(trace.final_profile).is_nash);
        let phis: Vec<_> = trace.profiles().into_iter().map(|x| game.potential(x)).collect();
        prop_assert!(phis.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn logit_chain_is_reversible(game in game_strategy(7), beta in 0.0f64..6.0) {
        let chain = LogitChain::new(game, beta).unwrap();
        prop_assert!(chain.check_reversibility().unwrap() <= 1e-12);
        let p = chain.transition_matrix().unwrap();
        prop_assert!(p.max_row_error() <= 1e-12);
    }

    #[test]
    fn canonical_paths_walk_the_cube(x in 0u64..256, y in 0u64..256) {
        let order = [3, 1, 4, 0, 7, 5, 2, 6];
        let path = canonical_path(Profile(x), Profile(y), &order);
        prop_assert_eq!(path.first().copied(), Some(Profile(x)));
        prop_assert_eq!(path.last().copied(), Some(Profile(y)));
        prop_assert_eq!(path.len() as u32, Profile(x).hamming(Profile(y)) + 1);
        prop_assert!(path.windows(2).all(|w| w[0].hamming(w[1]) == 1));
    }
}
