use crate::game::{GameDescriptor, GameState, Move, MoveTag, RuleFlags, Seat, UtilityVector};
use crate::games::GameId;

static DESCRIPTOR: GameDescriptor = GameDescriptor {
    id: GameId::Hex,
    name: "Hex",
    players: 2,
    zero_sum: true,
    stochastic: false,
    flags: RuleFlags {
        board: true,
        square_tiling: false,
        hex_tiling: true,
        dice: false,
        placement: true,
        piece_movement: false,
        capture: false,
        line_goal: false,
        connection_goal: true,
        race_goal: false,
        elimination_goal: false,
        score_goal: false,
        removal: false,
    },
};

const N: usize = 7;
const CELLS: usize = N * N;
// virtual edge nodes in the union-find
const TOP: usize = CELLS;
const BOTTOM: usize = CELLS + 1;
const LEFT: usize = CELLS + 2;
const RIGHT: usize = CELLS + 3;

/// Hex on a 7x7 rhombus. Seat 0 connects top to bottom, seat 1 left to
/// right. Move code = cell index (row-major). No swap rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hex {
    stones: [u64; 2],
    parent: [u8; CELLS + 4],
    mover: u8,
    winner: Option<u8>,
}

impl Hex {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb as u8;
        }
    }

    fn neighbours(cell: usize) -> impl Iterator<Item = usize> {
        let (r, c) = ((cell / N) as i32, (cell % N) as i32);
        [(-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0)]
            .into_iter()
            .filter_map(move |(dr, dc)| {
                let (nr, nc) = (r + dr, c + dc);
                ((0..N as i32).contains(&nr) && (0..N as i32).contains(&nc))
                    .then(|| (nr as usize) * N + nc as usize)
            })
    }
}

impl GameState for Hex {
    fn descriptor() -> &'static GameDescriptor {
        &DESCRIPTOR
    }

    fn new_game(_seed: u64) -> Self {
        let mut parent = [0u8; CELLS + 4];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        Self {
            stones: [0; 2],
            parent,
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
        let occupied = self.stones[0] | self.stones[1];
        out.extend(
            (0..CELLS)
                .filter(|&i| occupied & (1u64 << i) == 0)
                .map(|i| Move::new(i as u32, MoveTag::Place)),
        );
    }

    fn play(&mut self, mv: Move) {
        let cell = mv.code as usize;
        let seat = self.mover as usize;
        self.stones[seat] |= 1u64 << cell;
        let (r, c) = (cell / N, cell % N);
        if seat == 0 {
            if r == 0 {
                self.union(cell, TOP);
            }
            if r == N - 1 {
                self.union(cell, BOTTOM);
            }
        } else {
            if c == 0 {
                self.union(cell, LEFT);
            }
            if c == N - 1 {
                self.union(cell, RIGHT);
            }
        }
        for nb in Self::neighbours(cell) {
            if self.stones[seat] & (1u64 << nb) != 0 {
                self.union(cell, nb);
            }
        }
        let (a, b) = if seat == 0 { (TOP, BOTTOM) } else { (LEFT, RIGHT) };
        if self.find(a) == self.find(b) {
            self.winner = Some(seat as u8);
        }
        self.mover ^= 1;
    }

    fn utilities(&self) -> Option<UtilityVector> {
        self.winner.map(|w| UtilityVector::win(w as Seat))
    }
}
