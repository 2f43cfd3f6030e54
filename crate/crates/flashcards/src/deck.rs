//! The deck: a permutation of the positive integers with fast front
//! removal, rank insertion, and position queries.
//!
//! Only a finite prefix of the deck is ever disturbed, so the state is an
//! explicit *active* prefix plus an implicit identity tail. The active
//! prefix always holds exactly the cards `1..=L` (a card enters it the
//! first time an insertion reaches its position and never leaves), which
//! means every position `p > L` still holds card `p`.
//!
//! [`Deck`] keeps the prefix in an implicit treap indexed by position, with
//! parent pointers so card-to-position lookups are `O(log L)` as well.
//! Node `i` of the arena is card `i + 1` for its whole lifetime, and
//! priorities are a fixed hash of the node index, so deck evolution is
//! fully deterministic. [`NaiveDeck`] is the flat-array reference
//! implementation used as an oracle in tests and benchmarks.

use crate::error::{Error, Result};
use crate::rng::splitmix64;

/// Default cap on how far the active prefix may grow.
pub const DEFAULT_MAX_POSITION: u64 = 1 << 24;

/// Operations every deck representation supports.
pub trait DeckOps: Clone {
    /// The card currently at the front (position 1).
    fn front(&self) -> u64;

    /// The card at position `p >= 1`.
    fn card_at(&self, p: u64) -> u64;

    /// The position of card `c >= 1`. Inverse of [`DeckOps::card_at`].
    fn position_of(&self, c: u64) -> u64;

    /// Removes the front card and reinserts it at position `m >= 1`.
    /// Cards previously at positions `2..=m` move forward one position;
    /// everything past `m` is untouched. `m = 1` leaves the deck unchanged.
    fn remove_front_insert(&mut self, m: u64) -> Result<()>;

    /// Replaces the first `sigma.len()` positions: new position `i + 1`
    /// receives the card previously at position `sigma[i]`. `sigma` must be
    /// a permutation of `1..=sigma.len()`.
    fn apply_prefix_permutation(&mut self, sigma: &[u64]) -> Result<()>;

    /// Length of the materialized active prefix.
    fn active_len(&self) -> u64;

    /// First card of the implicit identity tail (`active_len() + 1`).
    fn tail_start(&self) -> u64 {
        self.active_len() + 1
    }

    /// Snapshot of the first `len` positions.
    fn prefix(&self, len: u64) -> Vec<u64> {
        (1..=len).map(|p| self.card_at(p)).collect()
    }
}

fn validate_sigma(sigma: &[u64]) -> Result<()> {
    let m = sigma.len() as u64;
    let mut seen = vec![false; sigma.len()];
    for &s in sigma {
        if s < 1 || s > m || seen[(s - 1) as usize] {
            return Err(Error::InvalidSigma(format!(
                "{s} repeats or falls outside 1..={m}"
            )));
        }
        seen[(s - 1) as usize] = true;
    }
    Ok(())
}

const NIL: u32 = u32::MAX;

#[derive(Clone, Copy, Debug)]
struct Node {
    left: u32,
    right: u32,
    parent: u32,
    size: u32,
}

impl Node {
    fn leaf() -> Self {
        Node {
            left: NIL,
            right: NIL,
            parent: NIL,
            size: 1,
        }
    }
}

/// Treap-backed deck. See the module docs for the representation.
#[derive(Clone)]
pub struct Deck {
    nodes: Vec<Node>,
    root: u32,
    cap: u64,
}

impl Default for Deck {
    fn default() -> Self {
        Self::new()
    }
}

impl Deck {
    /// Identity deck with the default materialization cap.
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_MAX_POSITION)
    }

    /// Identity deck whose active prefix may grow to at most `cap` positions.
    pub fn with_cap(cap: u64) -> Self {
        let cap = cap.min(u32::MAX as u64 - 1);
        Deck {
            nodes: Vec::new(),
            root: NIL,
            cap,
        }
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    fn prio(i: u32) -> u64 {
        splitmix64(0xDECC ^ i as u64)
    }

    fn size(&self, t: u32) -> u32 {
        if t == NIL {
            0
        } else {
            self.nodes[t as usize].size
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        self.nodes[t as usize].size = 1 + self.size(l) + self.size(r);
    }

    fn set_parent(&mut self, child: u32, parent: u32) {
        if child != NIL {
            self.nodes[child as usize].parent = parent;
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NIL {
            self.set_parent(b, NIL);
            return b;
        }
        if b == NIL {
            self.set_parent(a, NIL);
            return a;
        }
        if Self::prio(a) >= Self::prio(b) {
            let ar = self.nodes[a as usize].right;
            let m = self.merge(ar, b);
            self.nodes[a as usize].right = m;
            self.set_parent(m, a);
            self.pull(a);
            self.nodes[a as usize].parent = NIL;
            a
        } else {
            let bl = self.nodes[b as usize].left;
            let m = self.merge(a, bl);
            self.nodes[b as usize].left = m;
            self.set_parent(m, b);
            self.pull(b);
            self.nodes[b as usize].parent = NIL;
            b
        }
    }

    /// Splits off the first `k` positions; both returned roots are detached.
    fn split(&mut self, t: u32, k: u64) -> (u32, u32) {
        if t == NIL {
            return (NIL, NIL);
        }
        let ls = self.size(self.nodes[t as usize].left) as u64;
        if k <= ls {
            let l = self.nodes[t as usize].left;
            let (a, b) = self.split(l, k);
            self.nodes[t as usize].left = b;
            self.set_parent(b, t);
            self.pull(t);
            self.nodes[t as usize].parent = NIL;
            self.set_parent(a, NIL);
            (a, t)
        } else {
            let r = self.nodes[t as usize].right;
            let (a, b) = self.split(r, k - ls - 1);
            self.nodes[t as usize].right = a;
            self.set_parent(a, t);
            self.pull(t);
            self.nodes[t as usize].parent = NIL;
            self.set_parent(b, NIL);
            (t, b)
        }
    }

    /// Links the given nodes (left to right) into a treap in `O(len)` using
    /// the right-spine stack construction, then fixes subtree sizes.
    fn link_sequence(&mut self, seq: &[u32]) -> u32 {
        let mut spine: Vec<u32> = Vec::new();
        for &i in seq {
            self.nodes[i as usize] = Node::leaf();
            let mut last = NIL;
            while let Some(&top) = spine.last() {
                if Self::prio(top) < Self::prio(i) {
                    last = top;
                    spine.pop();
                } else {
                    break;
                }
            }
            self.nodes[i as usize].left = last;
            self.set_parent(last, i);
            if let Some(&top) = spine.last() {
                self.nodes[top as usize].right = i;
                self.nodes[i as usize].parent = top;
            }
            spine.push(i);
        }
        let root = match spine.first() {
            Some(&r) => r,
            None => return NIL,
        };
        self.fix_sizes(root);
        self.set_parent(root, NIL);
        root
    }

    fn fix_sizes(&mut self, t: u32) -> u32 {
        if t == NIL {
            return 0;
        }
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let s = 1 + self.fix_sizes(l) + self.fix_sizes(r);
        self.nodes[t as usize].size = s;
        s
    }

    /// Grows the active prefix to at least `len` positions by appending
    /// identity tail cards in bulk.
    fn materialize_to(&mut self, len: u64) -> Result<()> {
        let cur = self.nodes.len() as u64;
        if len <= cur {
            return Ok(());
        }
        if len > self.cap {
            return Err(Error::MaterializationCap {
                requested: len,
                cap: self.cap,
            });
        }
        let start = cur as u32;
        let count = (len - cur) as u32;
        self.nodes
            .extend(std::iter::repeat_n(Node::leaf(), count as usize));
        let block: Vec<u32> = (start..start + count).collect();
        let block_root = self.link_sequence(&block);
        let old = self.root;
        self.root = self.merge(old, block_root);
        Ok(())
    }

    fn select(&self, p: u64) -> u32 {
        debug_assert!(p >= 1 && p <= self.size(self.root) as u64);
        let mut t = self.root;
        let mut k = p;
        loop {
            let ls = self.size(self.nodes[t as usize].left) as u64;
            if k == ls + 1 {
                return t;
            }
            if k <= ls {
                t = self.nodes[t as usize].left;
            } else {
                k -= ls + 1;
                t = self.nodes[t as usize].right;
            }
        }
    }

    fn rank(&self, node: u32) -> u64 {
        let mut r = self.size(self.nodes[node as usize].left) as u64 + 1;
        let mut cur = node;
        let mut p = self.nodes[cur as usize].parent;
        while p != NIL {
            if self.nodes[p as usize].right == cur {
                r += self.size(self.nodes[p as usize].left) as u64 + 1;
            }
            cur = p;
            p = self.nodes[cur as usize].parent;
        }
        r
    }

    fn collect_inorder(&self, root: u32, out: &mut Vec<u32>) {
        let mut stack = Vec::new();
        let mut t = root;
        while t != NIL || !stack.is_empty() {
            while t != NIL {
                stack.push(t);
                t = self.nodes[t as usize].left;
            }
            let n = stack.pop().unwrap();
            out.push(n);
            t = self.nodes[n as usize].right;
        }
    }
}

impl DeckOps for Deck {
    fn front(&self) -> u64 {
        self.card_at(1)
    }

    fn card_at(&self, p: u64) -> u64 {
        debug_assert!(p >= 1);
        let len = self.nodes.len() as u64;
        if p > len {
            // identity tail: the active prefix holds exactly 1..=len
            p
        } else {
            self.select(p) as u64 + 1
        }
    }

    fn position_of(&self, c: u64) -> u64 {
        debug_assert!(c >= 1);
        if c > self.nodes.len() as u64 {
            c
        } else {
            self.rank((c - 1) as u32)
        }
    }

    fn remove_front_insert(&mut self, m: u64) -> Result<()> {
        debug_assert!(m >= 1);
        self.materialize_to(m.max(1))?;
        let (head, rest) = self.split(self.root, 1);
        let (a, b) = self.split(rest, m - 1);
        let left = self.merge(a, head);
        self.root = self.merge(left, b);
        Ok(())
    }

    fn apply_prefix_permutation(&mut self, sigma: &[u64]) -> Result<()> {
        if sigma.is_empty() {
            return Ok(());
        }
        validate_sigma(sigma)?;
        let m = sigma.len() as u64;
        self.materialize_to(m)?;
        let (block, rest) = self.split(self.root, m);
        let mut order = Vec::with_capacity(sigma.len());
        self.collect_inorder(block, &mut order);
        let permuted: Vec<u32> = sigma.iter().map(|&s| order[(s - 1) as usize]).collect();
        let block_root = self.link_sequence(&permuted);
        self.root = self.merge(block_root, rest);
        Ok(())
    }

    fn active_len(&self) -> u64 {
        self.nodes.len() as u64
    }

    fn prefix(&self, len: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(len as usize);
        let explicit = len.min(self.nodes.len() as u64);
        if explicit > 0 {
            // one traversal instead of `len` selects
            let mut nodes = Vec::with_capacity(self.nodes.len());
            self.collect_inorder(self.root, &mut nodes);
            out.extend(nodes[..explicit as usize].iter().map(|&n| n as u64 + 1));
        }
        out.extend(self.nodes.len() as u64 + 1..=len.max(explicit));
        out.truncate(len as usize);
        out
    }
}

impl std::fmt::Debug for Deck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let show = self.active_len().min(20);
        write!(f, "Deck{:?}", self.prefix(show))?;
        if self.active_len() > show {
            write!(f, "… (L={})", self.active_len())?;
        }
        Ok(())
    }
}

/// Flat-array deck with linear-time operations. Reference oracle.
#[derive(Clone, Debug)]
pub struct NaiveDeck {
    cards: Vec<u64>,
    cap: u64,
}

impl Default for NaiveDeck {
    fn default() -> Self {
        Self::new()
    }
}

impl NaiveDeck {
    pub fn new() -> Self {
        Self::with_cap(DEFAULT_MAX_POSITION)
    }

    pub fn with_cap(cap: u64) -> Self {
        NaiveDeck {
            cards: Vec::new(),
            cap,
        }
    }

    fn materialize_to(&mut self, len: u64) -> Result<()> {
        if len > self.cap {
            return Err(Error::MaterializationCap {
                requested: len,
                cap: self.cap,
            });
        }
        while (self.cards.len() as u64) < len {
            self.cards.push(self.cards.len() as u64 + 1);
        }
        Ok(())
    }
}

impl DeckOps for NaiveDeck {
    fn front(&self) -> u64 {
        self.card_at(1)
    }

    fn card_at(&self, p: u64) -> u64 {
        debug_assert!(p >= 1);
        if p > self.cards.len() as u64 {
            p
        } else {
            self.cards[(p - 1) as usize]
        }
    }

    fn position_of(&self, c: u64) -> u64 {
        debug_assert!(c >= 1);
        match self.cards.iter().position(|&x| x == c) {
            Some(i) => i as u64 + 1,
            None => c,
        }
    }

    fn remove_front_insert(&mut self, m: u64) -> Result<()> {
        debug_assert!(m >= 1);
        self.materialize_to(m.max(1))?;
        let c = self.cards.remove(0);
        self.cards.insert((m - 1) as usize, c);
        Ok(())
    }

    fn apply_prefix_permutation(&mut self, sigma: &[u64]) -> Result<()> {
        if sigma.is_empty() {
            return Ok(());
        }
        validate_sigma(sigma)?;
        self.materialize_to(sigma.len() as u64)?;
        let old: Vec<u64> = self.cards[..sigma.len()].to_vec();
        for (i, &s) in sigma.iter().enumerate() {
            self.cards[i] = old[(s - 1) as usize];
        }
        Ok(())
    }

    fn active_len(&self) -> u64 {
        self.cards.len() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn decks_and_games_cross_threads() {
        fn is_send_sync<T: Send + Sync>() {}
        is_send_sync::<Deck>();
        is_send_sync::<NaiveDeck>();
        is_send_sync::<crate::engine::GameState>();
        is_send_sync::<crate::variants::SigmaGame>();
    }

    #[test]
    fn identity_start() {
        let d = Deck::new();
        assert_eq!(d.card_at(1), 1);
        assert_eq!(d.card_at(100), 100);
        assert_eq!(d.front(), 1);
        assert_eq!(d.active_len(), 0);
    }

    #[test]
    fn first_two_moves_of_the_slow_game() {
        let mut d = Deck::new();
        d.remove_front_insert(2).unwrap();
        assert_eq!(d.prefix(4), vec![2, 1, 3, 4]);
        // moving the new front (card 2) to position 2 restores the identity
        d.remove_front_insert(2).unwrap();
        assert_eq!(d.prefix(4), vec![1, 2, 3, 4]);
    }

    #[test]
    fn insert_at_front_is_a_no_op() {
        let mut d = Deck::new();
        d.remove_front_insert(5).unwrap();
        let before = d.prefix(8);
        d.remove_front_insert(1).unwrap();
        assert_eq!(d.prefix(8), before);
    }

    #[test]
    fn cap_is_reported_not_truncated() {
        let mut d = Deck::with_cap(10);
        assert_eq!(
            d.remove_front_insert(11),
            Err(Error::MaterializationCap {
                requested: 11,
                cap: 10
            })
        );
        // failed insertion left the deck untouched
        assert_eq!(d.prefix(3), vec![1, 2, 3]);
        assert!(d.remove_front_insert(10).is_ok());
    }

    #[test]
    fn positions_and_cards_are_inverse() {
        let mut d = Deck::new();
        for k in 1..200u64 {
            d.remove_front_insert(stream(3, k) % 50 + 1).unwrap();
        }
        for p in 1..=d.active_len() + 100 {
            assert_eq!(d.position_of(d.card_at(p)), p);
        }
    }

    #[test]
    fn single_step_displacement() {
        let mut d = Deck::new();
        for k in 1..100u64 {
            d.remove_front_insert(k % 37 + 1).unwrap();
        }
        let m = 23u64;
        let before: Vec<u64> = d.prefix(60);
        d.remove_front_insert(m).unwrap();
        for (i, &c) in before.iter().enumerate() {
            let old_pos = i as u64 + 1;
            let new_pos = d.position_of(c);
            let delta = new_pos as i64 - old_pos as i64;
            if old_pos == 1 {
                assert_eq!(delta, m as i64 - 1);
            } else {
                assert!(delta == 0 || delta == -1, "card {c} moved by {delta}");
            }
        }
    }

    #[test]
    fn agrees_with_naive_on_random_workload() {
        let mut fast = Deck::new();
        let mut slow = NaiveDeck::new();
        for k in 0..3000u64 {
            let m = stream(11, k) % 200 + 1;
            fast.remove_front_insert(m).unwrap();
            slow.remove_front_insert(m).unwrap();
            assert_eq!(fast.front(), slow.front(), "step {k}");
        }
        assert_eq!(fast.active_len(), slow.active_len());
        assert_eq!(
            fast.prefix(fast.active_len()),
            slow.prefix(slow.active_len())
        );
    }

    #[test]
    fn prefix_permutation_matches_naive() {
        let mut fast = Deck::new();
        let mut slow = NaiveDeck::new();
        for k in 1..500u64 {
            let span = stream(5, k) % 30 + 2;
            // rotate the first `span` positions one step
            let mut sigma: Vec<u64> = (2..=span).collect();
            sigma.push(1);
            fast.apply_prefix_permutation(&sigma).unwrap();
            slow.apply_prefix_permutation(&sigma).unwrap();
            assert_eq!(fast.front(), slow.front());
        }
        assert_eq!(fast.prefix(40), slow.prefix(40));
    }

    #[test]
    fn rejects_non_permutations() {
        let mut d = Deck::new();
        assert!(matches!(
            d.apply_prefix_permutation(&[1, 1]),
            Err(Error::InvalidSigma(_))
        ));
        assert!(matches!(
            d.apply_prefix_permutation(&[0, 1]),
            Err(Error::InvalidSigma(_))
        ));
        assert!(matches!(
            d.apply_prefix_permutation(&[2, 3]),
            Err(Error::InvalidSigma(_))
        ));
    }

    #[test]
    fn bulk_materialization_keeps_order() {
        let mut d = Deck::new();
        // jump straight to a distant position, as recap-style schedules do
        d.remove_front_insert(4096).unwrap();
        assert_eq!(d.active_len(), 4096);
        assert_eq!(d.card_at(4096), 1);
        assert_eq!(d.card_at(1), 2);
        assert_eq!(d.card_at(4095), 4096);
        assert_eq!(d.card_at(5000), 5000);
        for p in (1..4096).step_by(97) {
            assert_eq!(d.card_at(p), p + 1);
        }
    }
}
