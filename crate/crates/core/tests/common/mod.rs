/// Five raw rows covering every preprocessing rule, with a three column toy
/// feature set. Rows 1 and 2 share a pairing and merge, row 3 reverses the
/// seat order, Chess is outside the built-in suite and Pig is played
/// against Random.
pub const FIVE_ROWS: &str = "\
game,agents,Stochastic,AlquerqueBoard,ChessBoard,utilities
Breakthrough,\"(UCB1Tuned-1.41-Random0, ProgressiveHistory-0.6-NST)\",0,1,0,(1.000000;-1.000000)
Breakthrough,\"(UCB1Tuned-1.41-Random0, ProgressiveHistory-0.6-NST)\",0,1,0,(0.000000;0.000000)
Breakthrough,\"(ProgressiveHistory-0.6-NST, UCB1Tuned-1.41-Random0)\",0,1,0,(-1.000000;1.000000)
Chess,\"(UCB1Tuned-0.1-MAST, UCB1-0.6-Random4)\",0,0,1,(1.000000;-1.000000)
Pig,\"(UCB1GRAVE-0.1-MAST, Random)\",1,0,0,(1.000000;-1.000000)
";
