use crate::game::{
    utilities_from_ranks, ChanceStream, GameDescriptor, GameState, Move, MoveTag, RankVector,
    RuleFlags, Seat, UtilityVector,
};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::TripleRace,
    name: "TripleRace",
    players: 3,
    zero_sum: true,
    stochastic: true,
    flags: RuleFlags {
        board: true,
        square_tiling: false,
        hex_tiling: false,
        dice: true,
        placement: false,
        piece_movement: true,
        capture: true,
        line_goal: false,
        connection_goal: false,
        race_goal: true,
        elimination_goal: false,
        score_goal: false,
        removal: false,
    },
};

pub const GOAL: u8 = 24;
const STEP: u32 = 0;
const ROLL: u32 = 1;

/// Three-player dice race on a 24-square track. Each turn a player either
/// steps one square or rolls a die and advances that far. The goal must be
/// hit exactly; overshooting bounces back. Landing on an opponent sends it
/// back to the start. The first to finish ranks first; the rest are ranked
/// by position.
#[derive(Clone, Debug, PartialEq)]
pub struct TripleRace {
    positions: [u8; 3],
    mover: u8,
    chance: ChanceStream,
}

impl TripleRace {
    pub fn positions(&self) -> [u8; 3] {
        self.positions
    }

    fn target(pos: u8, advance: u8) -> u8 {
        let raw = pos + advance;
        if raw > GOAL {
            GOAL - (raw - GOAL)
        } else {
            raw
        }
    }

    fn occupied_by_other(&self, square: u8) -> bool {
        let me = self.mover as usize;
        square != 0
            && self
                .positions
                .iter()
                .enumerate()
                .any(|(i, &p)| i != me && p == square)
    }

    fn finished(&self) -> bool {
        self.positions.contains(&GOAL)
    }
}

impl GameState for TripleRace {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(seed: u64) -> Self {
        Self {
            positions: [0; 3],
            mover: 0,
            chance: ChanceStream::new(seed),
        }
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.finished()
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        if self.finished() {
            return;
        }
        let step_to = Self::target(self.positions[self.mover as usize], 1);
        let step_tag = if self.occupied_by_other(step_to) {
            MoveTag::Capture
        } else {
            MoveTag::Step
        };
        out.push(Move::new(STEP, step_tag));
        out.push(Move::new(ROLL, MoveTag::Roll));
    }

    fn play(&mut self, mv: Move) {
        let me = self.mover as usize;
        let advance = if mv.code == ROLL {
            self.chance.roll(6)
        } else {
            1
        };
        let to = Self::target(self.positions[me], advance);
        if to != GOAL && to != 0 {
            for (i, p) in self.positions.iter_mut().enumerate() {
                if i != me && *p == to {
                    *p = 0;
                }
            }
        }
        self.positions[me] = to;
        self.mover = (self.mover + 1) % 3;
    }

    fn utilities(&self) -> Option<UtilityVector> {
        if !self.finished() {
            return None;
        }
        let scores: Vec<f64> = self.positions.iter().map(|&p| p as f64).collect();
        let ranks = RankVector::from_scores(&scores);
        Some(utilities_from_ranks(&ranks).expect("three players"))
    }

    fn reseed_chance(&mut self, seed: u64) {
        self.chance = ChanceStream::new(seed);
    }
}
