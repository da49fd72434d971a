//! Intrusive doubly linked lists with constant-time splicing.
//!
//! An arena owns a pool of slots and a pool of lists. A slot belongs to at
//! most one list; membership is recorded entirely in the slot's own `prev`
//! and `next` links, so a slot can be unlinked without knowing which list
//! holds it, and two lists can be concatenated without walking either.
//!
//! Links at the boundary of a list point back at the list itself
//! ([`Link::End`]), which is what lets `remove` patch `first`/`last` when it
//! unlinks a head or tail. Interior slots do not know their owner — that is
//! precisely why [`ListArena::concatenate`] is O(1).
//!
//! Two representation rules keep every operation within a fixed budget of
//! link-field accesses:
//!
//! * `last` is authoritative: a list is empty if and only if `last == None`.
//! * `first` may be stale while a list is empty; it is rewritten before the
//!   list is ever non-empty again.
//!
//! Every read or write of a `prev`/`next`/`first`/`last` field is tallied in
//! an access counter, so tests can verify the budget: `remove` costs at most
//! 6 accesses, `addnode` at most 7, `concatenate` at most 8.
//!
//! Storage is flat word arrays whose all-zero state reads as "detached slot"
//! and "empty list". [`ListArena::reserve`] therefore hands out zeroed pages
//! with no per-entry initialization, and regions never touched by a write
//! stay on the kernel's shared zero page. Keep zero meaning exactly that
//! when changing the encoding.

use std::cell::Cell;

/// Handle to one slot in a [`ListArena`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct SlotId(u32);

impl SlotId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Rebuilds the handle of slot number `i` (slots are numbered in
    /// allocation order). The caller must know `i` is allocated.
    pub(crate) fn from_index(i: usize) -> SlotId {
        SlotId(i as u32)
    }
}

/// Handle to one list in a [`ListArena`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ListId(u32);

impl ListId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// Rebuilds the handle of list number `i` (lists are numbered in
    /// allocation order). The caller must know `i` is allocated.
    pub(crate) fn from_index(i: usize) -> ListId {
        ListId(i as u32)
    }
}

/// A neighbor link: another slot, the owning list (at a boundary), or
/// nothing (slot not in any list).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Link {
    Detached,
    Slot(SlotId),
    End(ListId),
}

/// Storage form of [`Link`]: id in the high 30 bits, tag in the low 2.
/// Folding graphs carry two of these per edge end, so size matters.
#[derive(Clone, Copy, Debug)]
struct PackedLink(u32);

const TAG_DETACHED: u32 = 0;
const TAG_SLOT: u32 = 1;
const TAG_END: u32 = 2;
/// Ids must fit beside the tag.
const MAX_ID: u32 = (1 << 30) - 1;

impl PackedLink {
    fn pack(link: Link) -> PackedLink {
        match link {
            Link::Detached => PackedLink(TAG_DETACHED),
            Link::Slot(SlotId(id)) => PackedLink(id << 2 | TAG_SLOT),
            Link::End(ListId(id)) => PackedLink(id << 2 | TAG_END),
        }
    }

    fn unpack(self) -> Link {
        match self.0 & 0b11 {
            TAG_SLOT => Link::Slot(SlotId(self.0 >> 2)),
            TAG_END => Link::End(ListId(self.0 >> 2)),
            _ => Link::Detached,
        }
    }
}

/// Raw 0 encodes "no slot" — an all-zero pair of ends is an empty list —
/// so stored slot ids are offset by one.
fn pack_end(s: Option<SlotId>) -> u32 {
    s.map_or(0, |SlotId(id)| id + 1)
}

fn unpack_end(raw: u32) -> Option<SlotId> {
    (raw != 0).then(|| SlotId(raw - 1))
}

/// Arena of intrusive lists over slots carrying a payload of type `T`.
///
/// `links[2s]`/`links[2s+1]` hold slot `s`'s packed `prev`/`next`;
/// `ends[2l]`/`ends[2l+1]` hold list `l`'s `first`/`last`.
pub struct ListArena<T> {
    links: Vec<u32>,
    payloads: Vec<T>,
    ends: Vec<u32>,
    slots: usize,
    lists: usize,
    accesses: Cell<u64>,
}

impl<T> ListArena<T> {
    pub fn new() -> Self {
        ListArena {
            links: Vec::new(),
            payloads: Vec::new(),
            ends: Vec::new(),
            slots: 0,
            lists: 0,
            accesses: Cell::new(0),
        }
    }

    /// Total link-field reads and writes performed so far. Slot and list
    /// creation is plain allocation and is not tallied.
    pub fn access_count(&self) -> u64 {
        self.accesses.get()
    }

    pub fn reset_access_count(&self) {
        self.accesses.set(0);
    }

    fn tally(&self) {
        self.accesses.set(self.accesses.get() + 1);
    }

    fn read_prev(&self, s: SlotId) -> Link {
        self.tally();
        PackedLink(self.links[2 * s.index()]).unpack()
    }

    fn read_next(&self, s: SlotId) -> Link {
        self.tally();
        PackedLink(self.links[2 * s.index() + 1]).unpack()
    }

    fn write_prev(&mut self, s: SlotId, link: Link) {
        self.tally();
        self.links[2 * s.index()] = PackedLink::pack(link).0;
    }

    fn write_next(&mut self, s: SlotId, link: Link) {
        self.tally();
        self.links[2 * s.index() + 1] = PackedLink::pack(link).0;
    }

    fn read_first(&self, l: ListId) -> Option<SlotId> {
        self.tally();
        unpack_end(self.ends[2 * l.index()])
    }

    fn read_last(&self, l: ListId) -> Option<SlotId> {
        self.tally();
        unpack_end(self.ends[2 * l.index() + 1])
    }

    fn write_first(&mut self, l: ListId, s: Option<SlotId>) {
        self.tally();
        self.ends[2 * l.index()] = pack_end(s);
    }

    fn write_last(&mut self, l: ListId, s: Option<SlotId>) {
        self.tally();
        self.ends[2 * l.index() + 1] = pack_end(s);
    }

    /// Pre-allocates zeroed storage for `slots` more slots and `lists` more
    /// lists. All-zero storage already reads as detached slots and empty
    /// lists, so reservation costs no per-entry writes and untouched regions
    /// take no physical memory.
    pub fn reserve(&mut self, slots: usize, lists: usize) {
        let links_target = 2 * (self.slots + slots);
        if self.links.is_empty() {
            self.links = vec![0; links_target];
        } else if self.links.len() < links_target {
            self.links.resize(links_target, 0);
        }
        self.payloads.reserve(slots);
        let ends_target = 2 * (self.lists + lists);
        if self.ends.is_empty() {
            self.ends = vec![0; ends_target];
        } else if self.ends.len() < ends_target {
            self.ends.resize(ends_target, 0);
        }
    }

    /// Allocates a detached slot.
    pub fn new_slot(&mut self, payload: T) -> SlotId {
        assert!(self.slots <= MAX_ID as usize, "slot arena overflow");
        let id = SlotId(self.slots as u32);
        if self.links.len() < 2 * (self.slots + 1) {
            self.links.extend([0, 0]); // detached
        }
        self.payloads.push(payload);
        self.slots += 1;
        id
    }

    /// Allocates an empty list.
    pub fn new_list(&mut self) -> ListId {
        assert!(self.lists <= MAX_ID as usize, "list arena overflow");
        let id = ListId(self.lists as u32);
        if self.ends.len() < 2 * (self.lists + 1) {
            self.ends.extend([0, 0]); // empty
        }
        self.lists += 1;
        id
    }

    pub fn slot_count(&self) -> usize {
        self.slots
    }

    pub fn list_count(&self) -> usize {
        self.lists
    }

    pub fn payload(&self, s: SlotId) -> &T {
        &self.payloads[s.index()]
    }

    /// Whether the slot currently belongs to no list.
    pub fn is_detached(&self, s: SlotId) -> bool {
        self.read_prev(s) == Link::Detached
    }

    /// Unlinks a slot from whatever list holds it; no-op when detached.
    /// At most 6 link-field accesses.
    pub fn remove(&mut self, s: SlotId) {
        let prev = self.read_prev(s);
        let next = self.read_next(s);
        match (prev, next) {
            (Link::Detached, Link::Detached) => return,
            (Link::End(l), Link::End(l2)) => {
                // Sole slot: the list becomes empty. `first` goes stale,
                // which is fine — emptiness is judged by `last`.
                debug_assert_eq!(l, l2, "slot boundary links disagree");
                self.write_last(l, None);
            }
            (Link::End(l), Link::Slot(n)) => {
                self.write_first(l, Some(n));
                self.write_prev(n, Link::End(l));
            }
            (Link::Slot(p), Link::End(l)) => {
                self.write_next(p, Link::End(l));
                self.write_last(l, Some(p));
            }
            (Link::Slot(p), Link::Slot(n)) => {
                self.write_next(p, Link::Slot(n));
                self.write_prev(n, Link::Slot(p));
            }
            _ => panic!("corrupt slot links: one side detached, the other not"),
        }
        self.write_prev(s, Link::Detached);
        self.write_next(s, Link::Detached);
    }

    /// Appends a detached slot at the back of a list.
    /// At most 7 link-field accesses. Panics if the slot is attached.
    pub fn addnode(&mut self, s: SlotId, l: ListId) {
        let prev = self.read_prev(s);
        let next = self.read_next(s);
        assert!(
            prev == Link::Detached && next == Link::Detached,
            "addnode: slot is already in a list"
        );
        match self.read_last(l) {
            None => {
                self.write_first(l, Some(s));
                self.write_prev(s, Link::End(l));
            }
            Some(tail) => {
                self.write_next(tail, Link::Slot(s));
                self.write_prev(s, Link::Slot(tail));
            }
        }
        self.write_next(s, Link::End(l));
        self.write_last(l, Some(s));
    }

    /// Moves every slot of `donor` to the back of `target`, leaving `donor`
    /// empty. At most 8 link-field accesses. Panics if `target == donor`.
    pub fn concatenate(&mut self, target: ListId, donor: ListId) {
        assert_ne!(target, donor, "concatenate: a list cannot absorb itself");
        let Some(donor_tail) = self.read_last(donor) else {
            return; // empty donor: nothing to move
        };
        let donor_head = self.read_first(donor).expect("non-empty list has a first slot");
        match self.read_last(target) {
            None => {
                self.write_first(target, Some(donor_head));
                self.write_prev(donor_head, Link::End(target));
            }
            Some(tail) => {
                self.write_next(tail, Link::Slot(donor_head));
                self.write_prev(donor_head, Link::Slot(tail));
            }
        }
        self.write_next(donor_tail, Link::End(target));
        self.write_last(target, Some(donor_tail));
        self.write_last(donor, None);
    }

    pub fn is_empty(&self, l: ListId) -> bool {
        self.read_last(l).is_none()
    }

    /// First slot of the list, if any.
    pub fn head(&self, l: ListId) -> Option<SlotId> {
        // `last` is the authority on emptiness; `first` may be stale then.
        self.read_last(l)?;
        self.read_first(l)
    }

    /// Successor of an attached slot within its list; `None` at the tail.
    pub fn next_in_list(&self, s: SlotId) -> Option<SlotId> {
        match self.read_next(s) {
            Link::Slot(n) => Some(n),
            Link::End(_) => None,
            Link::Detached => panic!("next_in_list: slot is not in a list"),
        }
    }

    /// Iterates the slots of a list front to back.
    pub fn iter(&self, l: ListId) -> ListIter<'_, T> {
        ListIter { arena: self, cursor: self.head(l) }
    }

    /// Number of slots in the list (walks the list).
    pub fn len(&self, l: ListId) -> usize {
        self.iter(l).count()
    }

    /// Diagnostic: walks the list both ways and checks every structural
    /// invariant, returning the front-to-back slot order. Not budgeted.
    pub fn check_well_formed(&self, l: ListId) -> Result<Vec<SlotId>, String> {
        let Some(last) = self.read_last(l) else {
            return Ok(Vec::new()); // empty; `first` may be stale
        };
        let first = self.read_first(l).ok_or("non-empty list with no first")?;
        if self.read_prev(first) != Link::End(l) {
            return Err(format!("head slot {first:?} does not point back at list {l:?}"));
        }
        let mut forward = Vec::new();
        let mut cur = first;
        loop {
            if forward.len() > self.slots {
                return Err(format!("cycle detected walking list {l:?}"));
            }
            forward.push(cur);
            match self.read_next(cur) {
                Link::Slot(n) => {
                    if self.read_prev(n) != Link::Slot(cur) {
                        return Err(format!("back link of {n:?} does not match {cur:?}"));
                    }
                    cur = n;
                }
                Link::End(owner) => {
                    if owner != l {
                        return Err(format!("tail of {l:?} claims owner {owner:?}"));
                    }
                    break;
                }
                Link::Detached => return Err(format!("detached link inside list {l:?}")),
            }
        }
        if cur != last {
            return Err(format!("tail walk ended at {cur:?} but last is {last:?}"));
        }
        Ok(forward)
    }
}

impl<T> Default for ListArena<T> {
    fn default() -> Self {
        Self::new()
    }
}

pub struct ListIter<'a, T> {
    arena: &'a ListArena<T>,
    cursor: Option<SlotId>,
}

impl<T> Iterator for ListIter<'_, T> {
    type Item = SlotId;

    fn next(&mut self) -> Option<SlotId> {
        let cur = self.cursor?;
        self.cursor = self.arena.next_in_list(cur);
        Some(cur)
    }
}
