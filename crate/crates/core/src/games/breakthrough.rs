use crate::game::{GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::Breakthrough,
    name: "Breakthrough",
    players: 2,
    zero_sum: true,
    stochastic: false,
    flags: RuleFlags {
        board: true,
        square_tiling: true,
        hex_tiling: false,
        dice: false,
        placement: false,
        piece_movement: true,
        capture: true,
        line_goal: false,
        connection_goal: false,
        race_goal: true,
        elimination_goal: true,
        score_goal: false,
        removal: false,
    },
};

const SIZE: usize = 6;
const CELLS: usize = SIZE * SIZE;
const BOARD: u64 = (1u64 << CELLS) - 1;
const ROW0: u64 = (1u64 << SIZE) - 1;
const LAST_ROW: u64 = ROW0 << (CELLS - SIZE);
const COL0: u64 = {
    let mut m = 0u64;
    let mut r = 0;
    while r < SIZE {
        m |= 1u64 << (r * SIZE);
        r += 1;
    }
    m
};
const COL_LAST: u64 = COL0 << (SIZE - 1);

/// Breakthrough on a 6x6 board. Seat 0 starts on rows 0-1 and moves
/// towards row 5; seat 1 the reverse. Move code = `from * 36 + to`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Breakthrough {
    pieces: [u64; 2],
    mover: u8,
    winner: Option<u8>,
}

impl Breakthrough {
    /// Destination sets for the three forward directions of `seat`:
    /// (straight, towards lower column, towards higher column), each given
    /// as the shifted piece set.
    fn targets(&self, seat: usize) -> [u64; 3] {
        let p = self.pieces[seat];
        if seat == 0 {
            [
                (p << SIZE) & BOARD,
                ((p & !COL0) << (SIZE - 1)) & BOARD,
                ((p & !COL_LAST) << (SIZE + 1)) & BOARD,
            ]
        } else {
            [
                p >> SIZE,
                (p & !COL0) >> (SIZE + 1),
                (p & !COL_LAST) >> (SIZE - 1),
            ]
        }
    }

    fn has_any_move(&self, seat: usize) -> bool {
        let empty = !(self.pieces[0] | self.pieces[1]) & BOARD;
        let [straight, dl, dr] = self.targets(seat);
        let not_own = !self.pieces[seat] & BOARD;
        straight & empty != 0 || (dl | dr) & not_own != 0
    }
}

impl GameState for Breakthrough {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(_seed: u64) -> Self {
        Self {
            pieces: [ROW0 | (ROW0 << SIZE), LAST_ROW | (LAST_ROW >> SIZE)],
            mover: 0,
            winner: None,
        }
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.winner.is_some()
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        if self.is_terminal() {
            return;
        }
        let seat = self.mover as usize;
        let opp = self.pieces[1 - seat];
        let empty = !(self.pieces[0] | self.pieces[1]) & BOARD;
        let forward = if seat == 0 { SIZE as i32 } else { -(SIZE as i32) };
        let mut from_bits = self.pieces[seat];
        while from_bits != 0 {
            let from = from_bits.trailing_zeros() as i32;
            from_bits &= from_bits - 1;
            let col = from % SIZE as i32;
            for dc in [-1, 0, 1] {
                let c = col + dc;
                if !(0..SIZE as i32).contains(&c) {
                    continue;
                }
                let to = from + forward + dc;
                if !(0..CELLS as i32).contains(&to) {
                    continue;
                }
                let bit = 1u64 << to;
                let code = (from as u32) * CELLS as u32 + to as u32;
                if empty & bit != 0 {
                    out.push(Move::new(code, MoveTag::Step));
                } else if dc != 0 && opp & bit != 0 {
                    out.push(Move::new(code, MoveTag::Capture));
                }
            }
        }
    }

    fn play(&mut self, mv: Move) {
        let seat = self.mover as usize;
        let from = mv.code as usize / CELLS;
        let to = mv.code as usize % CELLS;
        self.pieces[seat] &= !(1u64 << from);
        self.pieces[seat] |= 1u64 << to;
        self.pieces[1 - seat] &= !(1u64 << to);
        let goal = if seat == 0 { LAST_ROW } else { ROW0 };
        self.mover ^= 1;
        if self.pieces[seat] & goal != 0 || self.pieces[1 - seat] == 0 {
            self.winner = Some(seat as u8);
        } else if !self.has_any_move(1 - seat) {
            // a player left without moves loses
            self.winner = Some(seat as u8);
        }
    }

    fn utilities(&self) -> Option<UtilityVector> {
        self.winner.map(|w| UtilityVector::win(w as Seat))
    }
}
