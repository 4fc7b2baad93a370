use crate::game::{
    ChanceStream, GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector,
};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::PigSolitaire,
    name: "PigSolitaire",
    players: 1,
    zero_sum: false,
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

pub const GOAL: u8 = 30;
pub const TURNS: u8 = 8;
const ROLL: Move = Move::new(0, MoveTag::Roll);
const HOLD: Move = Move::new(1, MoveTag::Pass);

/// One-player Pig: bank 30 points within 8 turns. Utility is the banked
/// fraction of the goal mapped linearly onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PigSolitaire {
    banked: u8,
    turn_total: u8,
    turns_left: u8,
    chance: ChanceStream,
}

impl GameState for PigSolitaire {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(seed: u64) -> Self {
        Self {
            banked: 0,
            turn_total: 0,
            turns_left: TURNS,
            chance: ChanceStream::new(seed),
        }
    }

    fn mover(&self) -> Seat {
        0
    }

    fn is_terminal(&self) -> bool {
        self.banked >= GOAL || self.turns_left == 0
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
        if mv == ROLL {
            let d = self.chance.roll(6);
            if d == 1 {
                self.turn_total = 0;
                self.turns_left -= 1;
            } else {
                self.turn_total += d;
                if self.banked + self.turn_total >= GOAL {
                    self.banked += self.turn_total;
                    self.turn_total = 0;
                }
            }
        } else {
            self.banked += self.turn_total;
            self.turn_total = 0;
            self.turns_left -= 1;
        }
    }

    fn utilities(&self) -> Option<UtilityVector> {
        self.is_terminal().then(|| {
            let u = (2.0 * self.banked as f64 / GOAL as f64 - 1.0).min(1.0);
            UtilityVector::new(vec![u]).expect("clamped utility")
        })
    }

    fn reseed_chance(&mut self, seed: u64) {
        self.chance = ChanceStream::new(seed);
    }
}
