use crate::game::{
    GameDescriptor, GameError, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector,
};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::TicTacToe,
    name: "TicTacToe",
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

const LINES: [u16; 8] = [
    0b000_000_111,
    0b000_111_000,
    0b111_000_000,
    0b001_001_001,
    0b010_010_010,
    0b100_100_100,
    0b100_010_001,
    0b001_010_100,
];

const FULL: u16 = 0b111_111_111;

/// 3x3 noughts and crosses; seat 0 plays X. Move code = cell index
/// (row-major, 0..9).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TicTacToe {
    marks: [u16; 2],
    mover: u8,
    winner: Option<u8>,
}

impl TicTacToe {
    /// Parses a 9-character board (`X`, `O`, `.`; whitespace and `/`
    /// ignored). The mover is inferred from the mark counts.
    pub fn from_board(board: &str) -> Result<Self, GameError> {
        let cells: Vec<char> = board
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '/')
            .collect();
        if cells.len() != 9 {
            return Err(GameError::UnknownGame(format!("bad board `{board}`")));
        }
        let mut marks = [0u16; 2];
        for (i, c) in cells.iter().enumerate() {
            match c {
                'X' | 'x' => marks[0] |= 1 << i,
                'O' | 'o' => marks[1] |= 1 << i,
                '.' | '-' | '_' => {}
                _ => return Err(GameError::UnknownGame(format!("bad board `{board}`"))),
            }
        }
        let (x, o) = (marks[0].count_ones(), marks[1].count_ones());
        if !(x == o || x == o + 1) {
            return Err(GameError::UnknownGame(format!("bad board `{board}`")));
        }
        let mut state = Self {
            marks,
            mover: if x == o { 0 } else { 1 },
            winner: None,
        };
        for (p, m) in marks.iter().enumerate() {
            if LINES.iter().any(|&l| m & l == l) {
                state.winner = Some(p as u8);
            }
        }
        Ok(state)
    }

    fn occupied(&self) -> u16 {
        self.marks[0] | self.marks[1]
    }
}

impl GameState for TicTacToe {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(_seed: u64) -> Self {
        Self {
            marks: [0; 2],
            mover: 0,
            winner: None,
        }
    }

    fn mover(&self) -> Seat {
        self.mover as Seat
    }

    fn is_terminal(&self) -> bool {
        self.winner.is_some() || self.occupied() == FULL
    }

    fn legal_moves_into(&self, out: &mut Vec<Move>) {
        out.clear();
        if self.is_terminal() {
            return;
        }
        let empty = !self.occupied() & FULL;
        out.extend(
            (0..9)
                .filter(|i| empty & (1 << i) != 0)
                .map(|i| Move::new(i, MoveTag::Place)),
        );
    }

    fn play(&mut self, mv: Move) {
        let p = self.mover as usize;
        self.marks[p] |= 1 << mv.code;
        if LINES.iter().any(|&l| self.marks[p] & l == l) {
            self.winner = Some(self.mover);
        }
        self.mover ^= 1;
    }

    fn utilities(&self) -> Option<UtilityVector> {
        match self.winner {
            Some(w) => Some(UtilityVector::win(w as Seat)),
            None if self.occupied() == FULL => Some(UtilityVector::zeros(2)),
            None => None,
        }
    }
}
