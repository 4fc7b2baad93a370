use crate::game::{GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::ConnectFour,
    name: "ConnectFour",
    players: 2,
    zero_sum: true,
    stochastic: false,
    flags: RuleFlags {
        board: true,
        square_tiling: true,
        hex_tiling: false,
        dice: false,
        placement: true,
        piece_movement: false,
        capture: false,
        line_goal: true,
        connection_goal: false,
        race_goal: false,
        elimination_goal: false,
        score_goal: false,
        removal: false,
    },
};

pub const WIDTH: usize = 7;
pub const HEIGHT: usize = 6;
const COL_BITS: usize = HEIGHT + 1;

/// Connect-Four on the standard 7x6 board. Move code = column.
///
/// Bitboard layout: column `c` occupies bits `c*7 .. c*7+6`, bit 6 of each
/// column is a sentinel so line shifts never wrap.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConnectFour {
    stones: [u64; 2],
    heights: [u8; WIDTH],
    mover: u8,
    plies: u8,
    winner: Option<u8>,
}

fn has_four(b: u64) -> bool {
    for shift in [1, COL_BITS, COL_BITS - 1, COL_BITS + 1] {
        let m = b & (b >> shift);
        if m & (m >> (2 * shift)) != 0 {
            return true;
        }
    }
    false
}

impl ConnectFour {
    /// Plays a sequence of columns from the empty board.
    pub fn from_columns(columns: &[u8]) -> Option<Self> {
        let mut s = Self::new_game(0);
        for &c in columns {
            let mv = s.find_move(c as u32)?;
            s.play(mv);
        }
        Some(s)
    }
}

impl GameState for ConnectFour {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(_seed: u64) -> Self {
        Self {
            stones: [0; 2],
            heights: [0; WIDTH],
            mover: 0,
            plies: 0,
            winner: None,
        }
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.winner.is_some() || self.plies as usize == WIDTH * HEIGHT
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        if self.is_terminal() {
            return;
        }
        out.extend(
            (0..WIDTH)
                .filter(|&c| (self.heights[c] as usize) < HEIGHT)
                .map(|c| Move::new(c as u32, MoveTag::Place)),
        );
    }

    fn play(&mut self, mv: Move) {
        let c = mv.code as usize;
        let p = self.mover as usize;
        self.stones[p] |= 1u64 << (c * COL_BITS + self.heights[c] as usize);
        self.heights[c] += 1;
        self.plies += 1;
        if has_four(self.stones[p]) {
            self.winner = Some(self.mover);
        }
        self.mover ^= 1;
    }

    fn utilities(&self) -> Option<UtilityVector> {
        match self.winner {
            Some(w) => Some(UtilityVector::win(w as Seat)),
            None if self.is_terminal() => Some(UtilityVector::zeros(2)),
            None => None,
        }
    }
}
