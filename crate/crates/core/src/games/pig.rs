use crate::game::{
    ChanceStream, GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector,
};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::Pig,
    name: "Pig",
    players: 2,
    zero_sum: true,
    stochastic: true,
    flags: RuleFlags {
        board: false,
        square_tiling: false,
        hex_tiling: false,
        dice: true,
        placement: false,
        piece_movement: false,
        capture: false,
        line_goal: false,
        connection_goal: false,
        race_goal: false,
        elimination_goal: false,
        score_goal: true,
        removal: false,
    },
};

pub const GOAL: u8 = 50;
pub const ROLL: Move = Move::new(0, MoveTag::Roll);
pub const HOLD: Move = Move::new(1, MoveTag::Pass);

/// Two-player Pig: roll a die to grow the turn total (a 1 wipes it and ends
/// the turn) or hold to bank it. First to bank 50 wins; reaching 50 with the
/// turn total ends the game immediately.
#[derive(Clone, Debug, PartialEq)]
pub struct Pig {
    banked: [u8; 2],
    turn_total: u8,
    mover: u8,
    last_roll: u8,
    chance: ChanceStream,
}

impl Pig {
    pub fn banked(&self) -> [u8; 2] {
        self.banked
    }

    pub fn turn_total(&self) -> u8 {
        self.turn_total
    }

    pub fn last_roll(&self) -> u8 {
        self.last_roll
    }

    fn winner(&self) -> Option<usize> {
        self.banked.iter().position(|&b| b >= GOAL)
    }
}

impl GameState for Pig {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(seed: u64) -> Self {
        Self {
            banked: [0; 2],
            turn_total: 0,
            mover: 0,
            last_roll: 0,
            chance: ChanceStream::new(seed),
        }
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.winner().is_some()
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        if self.is_terminal() {
            return;
        }
        out.push(ROLL);
        if self.turn_total > 0 {
            out.push(HOLD);
        }
    }

    fn play(&mut self, mv: Move) {
        let m = self.mover as usize;
        if mv == ROLL {
            let d = self.chance.roll(6);
            self.last_roll = d;
            if d == 1 {
                self.turn_total = 0;
                self.mover ^= 1;
            } else {
                self.turn_total += d;
                if self.banked[m] + self.turn_total >= GOAL {
                    self.banked[m] += self.turn_total;
                    self.turn_total = 0;
                }
            }
        } else {
            self.banked[m] += self.turn_total;
            self.turn_total = 0;
            self.mover ^= 1;
        }
    }

    fn utilities(&self) -> Option<UtilityVector> {
        self.winner().map(UtilityVector::win)
    }

    fn reseed_chance(&mut self, seed: u64) {
        self.chance = ChanceStream::new(seed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hold_needs_turn_total() {
        assert_eq!(Pig::new_game(1).legal_moves(), vec![ROLL]);
    }

    #[test]
    fn seeded_roll_reproducible() {
        let a = Pig::new_game(42).apply_move(ROLL).unwrap();
        let b = Pig::new_game(42).apply_move(ROLL).unwrap();
        assert_eq!(a.snapshot(), b.snapshot());
        assert!((1..=6).contains(&a.last_roll()));
    }

    #[test]
    fn reseeding_changes_outcomes() {
        let rolls = |seed| {
            let mut s = Pig::new_game(0);
            s.reseed_chance(seed);
            (0..30).map(|_| s.chance.roll(6)).collect::<Vec<_>>()
        };
        assert_ne!(rolls(1), rolls(2));
    }
}
