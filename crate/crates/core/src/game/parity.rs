//! Zielonka's recursive algorithm over edge priorities (max priority seen
//! infinitely often, even wins for Eve).

use super::{Arena, GameError, Player, PositionalStrategy};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParitySolution {
    pub eve_wins: Vec<bool>,
    pub eve_strategy: PositionalStrategy,
    pub adam_strategy: PositionalStrategy,
}

/// Vertex-priority game obtained by subdividing every edge.
struct VGame {
    owner: Vec<Player>,
    prio: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
}

pub fn solve_parity(arena: &Arena) -> Result<ParitySolution, GameError> {
    for p in 0..arena.len() {
        if arena.out[p].is_empty() {
            return Err(GameError::NoSuccessor(arena.names[p].clone()));
        }
    }
    let n = arena.len();
    let m = arena.edges.len();
    let total = n + m;
    let mut g = VGame {
        owner: Vec::with_capacity(total),
        prio: vec![0; total],
        succ: vec![Vec::new(); total],
        pred: vec![Vec::new(); total],
    };
    g.owner.extend(arena.owners.iter().copied());
    for (i, e) in arena.edges.iter().enumerate() {
        let mid = n + i;
        g.owner.push(Player::Eve);
        g.prio[mid] = e.priority.unwrap_or(0);
        g.succ[e.from].push(mid);
        g.pred[mid].push(e.from);
        g.succ[mid].push(e.to);
        g.pred[e.to].push(mid);
    }
    let mask = vec![true; total];
    let mut strat = vec![None; total];
    let (w_eve, _) = zielonka(&g, &mask, &mut strat);
    let mut eve_strategy = vec![None; n];
    let mut adam_strategy = vec![None; n];
    for p in 0..n {
        let chosen = strat[p].map(|mid: usize| mid - n);
        match (arena.owners[p], w_eve[p]) {
            (Player::Eve, true) => eve_strategy[p] = chosen,
            (Player::Adam, false) => adam_strategy[p] = chosen,
            _ => {}
        }
    }
    Ok(ParitySolution {
        eve_wins: w_eve[..n].to_vec(),
        eve_strategy,
        adam_strategy,
    })
}

fn attr(g: &VGame, mask: &[bool], player: Player, target: &[bool], strat: &mut [Option<usize>]) -> Vec<bool> {
    let n = g.owner.len();
    let mut a = vec![false; n];
    let mut count = vec![0usize; n];
    let mut queue = std::collections::VecDeque::new();
    for v in 0..n {
        if mask[v] {
            count[v] = g.succ[v].iter().filter(|&&s| mask[s]).count();
            if target[v] {
                a[v] = true;
                queue.push_back(v);
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &u in &g.pred[v] {
            if !mask[u] || a[u] {
                continue;
            }
            if g.owner[u] == player {
                a[u] = true;
                strat[u] = Some(v);
                queue.push_back(u);
            } else {
                count[u] -= 1;
                if count[u] == 0 {
                    a[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    a
}

/// Returns winning regions (Eve, Adam) of the subgame `mask`, writing the
/// winners' strategies into `strat`.
fn zielonka(g: &VGame, mask: &[bool], strat: &mut Vec<Option<usize>>) -> (Vec<bool>, Vec<bool>) {
    let n = g.owner.len();
    let Some(d) = (0..n).filter(|&v| mask[v]).map(|v| g.prio[v]).max() else {
        return (vec![false; n], vec![false; n]);
    };
    let player = if d % 2 == 0 { Player::Eve } else { Player::Adam };
    let top: Vec<bool> = (0..n).map(|v| mask[v] && g.prio[v] == d).collect();
    let mut attr_strat = vec![None; n];
    let a = attr(g, mask, player, &top, &mut attr_strat);
    let rest: Vec<bool> = (0..n).map(|v| mask[v] && !a[v]).collect();
    let mut sub_strat = vec![None; n];
    let (w0, w1) = zielonka(g, &rest, &mut sub_strat);
    let w_opp = if player == Player::Eve { w1 } else { w0 };
    if !w_opp.iter().any(|&b| b) {
        for v in 0..n {
            if !mask[v] || g.owner[v] != player {
                continue;
            }
            strat[v] = if rest[v] {
                sub_strat[v]
            } else if top[v] {
                g.succ[v].iter().copied().find(|&s| mask[s])
            } else {
                attr_strat[v]
            };
        }
        let all = mask.to_vec();
        let none = vec![false; n];
        return if player == Player::Eve { (all, none) } else { (none, all) };
    }
    let opp = player.opponent();
    let mut b_strat = vec![None; n];
    let b = attr(g, mask, opp, &w_opp, &mut b_strat);
    let rest2: Vec<bool> = (0..n).map(|v| mask[v] && !b[v]).collect();
    let mut sub2 = vec![None; n];
    let (x0, x1) = zielonka(g, &rest2, &mut sub2);
    let (x_player, x_opp) = if player == Player::Eve { (x0, x1) } else { (x1, x0) };
    let mut win_opp = x_opp.clone();
    for v in 0..n {
        if !mask[v] {
            continue;
        }
        if b[v] {
            win_opp[v] = true;
            if g.owner[v] == opp {
                strat[v] = if w_opp[v] { sub_strat[v] } else { b_strat[v] };
            }
        } else if (x_player[v] && g.owner[v] == player) || (x_opp[v] && g.owner[v] == opp) {
            strat[v] = sub2[v];
        }
    }
    if player == Player::Eve {
        (x_player, win_opp)
    } else {
        (win_opp, x_player)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loops(owner: Player, prios: &[u32]) -> Arena {
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", owner);
        for &pr in prios {
            a.add_edge(p, p, None, None, Some(pr));
        }
        a
    }

    #[test]
    fn even_priorities_win_for_eve() {
        let s = solve_parity(&loops(Player::Adam, &[0, 2, 4])).unwrap();
        assert!(s.eve_wins[0]);
    }

    #[test]
    fn single_odd_loop_is_lost() {
        let s = solve_parity(&loops(Player::Eve, &[1])).unwrap();
        assert!(!s.eve_wins[0]);
    }

    #[test]
    fn owner_picks_best_loop() {
        let s = solve_parity(&loops(Player::Eve, &[1, 2])).unwrap();
        assert!(s.eve_wins[0]);
        assert_eq!(s.eve_strategy[0], Some(1));
        let s = solve_parity(&loops(Player::Adam, &[1, 2])).unwrap();
        assert!(!s.eve_wins[0]);
        assert_eq!(s.adam_strategy[0], Some(0));
    }

    #[test]
    fn max_priority_decides_cycles() {
        // p --1--> q --2--> p : max seen infinitely often is 2.
        let mut a = Arena::new(vec![]);
        let p = a.add_position("p", Player::Adam);
        let q = a.add_position("q", Player::Adam);
        a.add_edge(p, q, None, None, Some(1));
        a.add_edge(q, p, None, None, Some(2));
        a.add_edge(q, q, None, None, Some(3));
        let s = solve_parity(&a).unwrap();
        assert!(!s.eve_wins[p]);
        assert_eq!(s.adam_strategy[q], Some(2));
    }
}
