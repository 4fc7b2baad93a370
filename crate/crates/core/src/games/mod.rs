//! Built-in game suite.

use std::fmt;
use std::str::FromStr;

use crate::game::{GameDescriptor, GameError, GameState};

mod breakthrough;
mod connect_four;
mod einstein;
mod hex;
mod nim;
mod pig;
mod pig_solitaire;
mod tic_tac_toe;
mod triple_race;

pub use breakthrough::Breakthrough;
pub use connect_four::ConnectFour;
pub use einstein::EinStein;
pub use hex::Hex;
pub use nim::Nim;
pub use pig::Pig;
pub use pig_solitaire::PigSolitaire;
pub use tic_tac_toe::TicTacToe;
pub use triple_race::TripleRace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameId {
    TicTacToe,
    ConnectFour,
    Breakthrough,
    Hex,
    Nim,
    Pig,
    EinStein,
    TripleRace,
    PigSolitaire,
}

impl GameId {
    pub const ALL: [GameId; 9] = [
        GameId::TicTacToe,
        GameId::ConnectFour,
        GameId::Breakthrough,
        GameId::Hex,
        GameId::Nim,
        GameId::Pig,
        GameId::EinStein,
        GameId::TripleRace,
        GameId::PigSolitaire,
    ];

    pub fn descriptor(self) -> &'static GameDescriptor {
        crate::with_game!(self, G => G::descriptor())
    }

    pub fn name(self) -> &'static str {
        self.descriptor().name
    }

    pub fn players(self) -> usize {
        self.descriptor().players
    }

    /// Looks a game up by its registry name.
    pub fn by_name(name: &str) -> Option<GameId> {
        name.parse().ok()
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn normalise(s: &str) -> String {
    s.chars()
        .filter(|c| c.is_ascii_alphanumeric())
        .map(|c| c.to_ascii_lowercase())
        .collect()
}

impl FromStr for GameId {
    type Err = GameError;

    /// Case-insensitive; ignores separators (`tic-tac-toe` == `TicTacToe`).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = normalise(s);
        GameId::ALL
            .into_iter()
            .find(|g| normalise(g.name()) == key)
            .ok_or_else(|| GameError::UnknownGame(s.to_string()))
    }
}

/// Descriptors of every built-in game, in registry order.
pub fn registry() -> Vec<&'static GameDescriptor> {
    GameId::ALL.iter().map(|g| g.descriptor()).collect()
}

/// Runs `$body` with `$G` bound to the concrete state type of `$id`.
#[macro_export]
macro_rules! with_game {
    ($id:expr, $G:ident => $body:expr) => {{
        use $crate::games::GameId as __GameId;
        match $id {
            __GameId::TicTacToe => {
                type $G = $crate::games::TicTacToe;
                $body
            }
            __GameId::ConnectFour => {
                type $G = $crate::games::ConnectFour;
                $body
            }
            __GameId::Breakthrough => {
                type $G = $crate::games::Breakthrough;
                $body
            }
            __GameId::Hex => {
                type $G = $crate::games::Hex;
                $body
            }
            __GameId::Nim => {
                type $G = $crate::games::Nim;
                $body
            }
            __GameId::Pig => {
                type $G = $crate::games::Pig;
                $body
            }
            __GameId::EinStein => {
                type $G = $crate::games::EinStein;
                $body
            }
            __GameId::TripleRace => {
                type $G = $crate::games::TripleRace;
                $body
            }
            __GameId::PigSolitaire => {
                type $G = $crate::games::PigSolitaire;
                $body
            }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{GameState, Move};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_contents() {
        let reg = registry();
        assert!(reg.len() >= 8);
        assert!(reg.iter().filter(|d| d.stochastic).count() >= 2);
        assert!(reg.iter().any(|d| d.players == 3));
        let hex = GameId::Hex.descriptor();
        assert!(hex.zero_sum && !hex.stochastic);
        assert!(GameId::Pig.descriptor().stochastic);
        assert_eq!(GameId::TripleRace.players(), 3);
        for (i, d) in reg.iter().enumerate() {
            assert_eq!(d.id, GameId::ALL[i]);
        }
    }

    #[test]
    fn names_parse_loosely() {
        assert_eq!("tic-tac-toe".parse::<GameId>().unwrap(), GameId::TicTacToe);
        assert_eq!("connect_four".parse::<GameId>().unwrap(), GameId::ConnectFour);
        assert!("Chess".parse::<GameId>().is_err());
        for g in GameId::ALL {
            assert_eq!(g.name().parse::<GameId>().unwrap(), g);
        }
    }

    fn random_play<G: GameState>(seed: u64, cap: usize) -> (G, usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = G::new_game(seed);
        let mut moves = Vec::new();
        let mut n = 0;
        while !state.is_terminal() && n < cap {
            state.legal_moves_into(&mut moves);
            let mv = *moves.choose(&mut rng).unwrap();
            // every legal move must be accepted by the checked path
            state = state.apply_move(mv).unwrap();
            n += 1;
        }
        (state, n)
    }

    fn check_game<G: GameState>() {
        let d = G::descriptor();
        let mut terminated = 0;
        for seed in 0..300 {
            let (state, _) = random_play::<G>(seed, 5000);
            if state.is_terminal() {
                terminated += 1;
                assert!(state.legal_moves().is_empty(), "{}", d.name);
                let u = state.utilities().unwrap();
                assert_eq!(u.len(), d.players);
                if d.zero_sum {
                    assert!(u.is_zero_sum(), "{}: {u:?}", d.name);
                }
                assert!(u.as_slice().iter().all(|x| (-1.0..=1.0).contains(x)));
            } else {
                assert!(!state.legal_moves().is_empty());
                assert!(state.utilities().is_none());
            }
        }
        assert!(terminated >= 297, "{} terminated {terminated}/300", d.name);
    }

    #[test]
    fn all_games_consistent_under_random_play() {
        for g in GameId::ALL {
            crate::with_game!(g, G => check_game::<G>());
        }
    }

    fn check_rejects_foreign<G: GameState>() {
        let state = G::new_game(3);
        let legal = state.legal_moves();
        let bogus = Move::new(u32::MAX, legal[0].tag);
        assert!(matches!(
            state.apply_move(bogus),
            Err(GameError::IllegalMove { .. })
        ));
    }

    #[test]
    fn all_games_reject_illegal_moves() {
        for g in GameId::ALL {
            crate::with_game!(g, G => check_rejects_foreign::<G>());
        }
    }

    fn check_replay<G: GameState>() {
        let (a, _) = random_play::<G>(42, 5000);
        let (b, _) = random_play::<G>(42, 5000);
        assert_eq!(a.snapshot(), b.snapshot());
    }

    #[test]
    fn replay_is_bit_identical() {
        for g in GameId::ALL {
            crate::with_game!(g, G => check_replay::<G>());
        }
    }

    fn check_move_order_stable<G: GameState>() {
        let (s, _) = random_play::<G>(9, 3);
        if !s.is_terminal() {
            assert_eq!(s.legal_moves(), s.legal_moves());
        }
    }

    #[test]
    fn legal_move_order_stable() {
        for g in GameId::ALL {
            crate::with_game!(g, G => check_move_order_stable::<G>());
        }
    }
}
