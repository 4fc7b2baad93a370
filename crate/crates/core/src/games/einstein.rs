use crate::game::{
    ChanceStream, GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector,
};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::EinStein,
    name: "EinStein",
    players: 2,
    zero_sum: true,
    stochastic: true,
    flags: RuleFlags {
        board: true,
        square_tiling: true,
        hex_tiling: false,
        dice: true,
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

const N: i32 = 5;
const CELLS: usize = 25;
const SETUP: [(i32, i32); 6] = [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)];

/// EinStein-style dice game on 5x5. Each side has pieces numbered 1-6; a die
/// picks the piece to move (or the nearest lower/higher surviving number).
/// Seat 0 starts top-left and heads for the bottom-right corner, moving
/// right, down or diagonally; seat 1 mirrors. Landing on any piece captures
/// it. Reaching the far corner or capturing every enemy piece wins.
///
/// The die for the player to move is rolled as part of the previous move
/// (and at setup). Move code = `from * 25 + to`.
#[derive(Clone, Debug, PartialEq)]
pub struct EinStein {
    /// +n: seat 0 piece n, -n: seat 1 piece n, 0: empty
    board: [i8; CELLS],
    mover: u8,
    die: u8,
    winner: Option<u8>,
    chance: ChanceStream,
}

impl EinStein {
    pub fn die(&self) -> u8 {
        self.die
    }

    fn sign(seat: usize) -> i8 {
        if seat == 0 {
            1
        } else {
            -1
        }
    }

    fn piece_square(&self, seat: usize, number: u8) -> Option<usize> {
        let want = Self::sign(seat) * number as i8;
        self.board.iter().position(|&p| p == want)
    }

    fn movable_pieces(&self) -> Vec<usize> {
        let seat = self.mover as usize;
        if let Some(sq) = self.piece_square(seat, self.die) {
            return vec![sq];
        }
        let lower = (1..self.die)
            .rev()
            .find_map(|n| self.piece_square(seat, n));
        let higher = (self.die + 1..=6).find_map(|n| self.piece_square(seat, n));
        lower.into_iter().chain(higher).collect()
    }

    fn pieces_left(&self, seat: usize) -> usize {
        let s = Self::sign(seat);
        self.board.iter().filter(|&&p| p * s > 0).count()
    }
}

impl GameState for EinStein {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(seed: u64) -> Self {
        let mut board = [0i8; CELLS];
        for (i, &(r, c)) in SETUP.iter().enumerate() {
            board[(r * N + c) as usize] = i as i8 + 1;
            board[((N - 1 - r) * N + (N - 1 - c)) as usize] = -(i as i8 + 1);
        }
        let mut chance = ChanceStream::new(seed);
        let die = chance.roll(6);
        Self {
            board,
            mover: 0,
            die,
            winner: None,
            chance,
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
        let dir = if self.mover == 0 { 1 } else { -1 };
        for from in self.movable_pieces() {
            let (r, c) = (from as i32 / N, from as i32 % N);
            for (dr, dc) in [(0, dir), (dir, 0), (dir, dir)] {
                let (nr, nc) = (r + dr, c + dc);
                if !(0..N).contains(&nr) || !(0..N).contains(&nc) {
                    continue;
                }
                let to = (nr * N + nc) as usize;
                let tag = if self.board[to] != 0 {
                    MoveTag::Capture
                } else {
                    MoveTag::Step
                };
                out.push(Move::new((from * CELLS + to) as u32, tag));
            }
        }
    }

    fn play(&mut self, mv: Move) {
        let seat = self.mover as usize;
        let from = mv.code as usize / CELLS;
        let to = mv.code as usize % CELLS;
        self.board[to] = self.board[from];
        self.board[from] = 0;
        let goal = if seat == 0 { CELLS - 1 } else { 0 };
        if to == goal || self.pieces_left(1 - seat) == 0 {
            self.winner = Some(seat as u8);
            return;
        }
        self.mover ^= 1;
        self.die = self.chance.roll(6);
    }

    fn utilities(&self) -> Option<UtilityVector> {
        self.winner.map(|w| UtilityVector::win(w as Seat))
    }

    fn reseed_chance(&mut self, seed: u64) {
        self.chance = ChanceStream::new(seed);
    }
}
