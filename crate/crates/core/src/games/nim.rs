use crate::game::{GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::Nim,
    name: "Nim",
    players: 2,
    zero_sum: true,
    stochastic: false,
    flags: RuleFlags {
        board: false,
        square_tiling: false,
        hex_tiling: false,
        dice: false,
        placement: false,
        piece_movement: false,
        capture: false,
        line_goal: false,
        connection_goal: false,
        race_goal: false,
        elimination_goal: false,
        score_goal: false,
        removal: true,
    },
};

pub const START_HEAPS: [u8; 3] = [3, 5, 7];

/// Normal-play Nim: take any positive number of objects from one heap; the
/// player taking the last object wins. Move code = `heap * 8 + count`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nim {
    heaps: [u8; 3],
    mover: u8,
}

impl Nim {
    pub fn with_heaps(heaps: [u8; 3], mover: Seat) -> Self {
        Self {
            heaps,
            mover: mover as u8,
        }
    }

    pub fn heaps(&self) -> [u8; 3] {
        self.heaps
    }

    pub fn encode(heap: usize, count: u8) -> Move {
        Move::new(heap as u32 * 8 + count as u32, MoveTag::Remove)
    }
}

impl GameState for Nim {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(_seed: u64) -> Self {
        Self::with_heaps(START_HEAPS, 0)
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.heaps.iter().all(|&h| h == 0)
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        for (i, &h) in self.heaps.iter().enumerate() {
            out.extend((1..=h).map(|n| Self::encode(i, n)));
        }
    }

    fn play(&mut self, mv: Move) {
        let heap = (mv.code / 8) as usize;
        self.heaps[heap] -= (mv.code % 8) as u8;
        self.mover ^= 1;
    }

    fn utilities(&self) -> Option<UtilityVector> {
        // whoever moved last (the player not to move) took the last object
        self.is_terminal()
            .then(|| UtilityVector::win(1 - self.mover as Seat))
    }
}
