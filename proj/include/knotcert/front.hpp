// Combinatorial rectilinear Legendrian front diagrams, used as an
// independent brute-force oracle for tb/rot and for the stabilization and
// connected-sum rules.
//
// A front is a word of events read left to right, each acting on the current
// ordered list of strand slots (slot 1 is topmost):
//   L i  — left cusp, inserts two new strands directly below slot i (0 <= i <= count)
//   R i  — right cusp, merges the strands at slots i and i+1
//   X i  — crossing of the strands at slots i and i+1

#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "knotcert/trace.hpp"

namespace knotcert {

struct FrontEvent {
    enum class Type { LeftCusp, RightCusp, Crossing };
    Type type;
    int slot;
};

struct FrontWord {
    std::vector<FrontEvent> events;

    static FrontWord parse(const std::string& text) {
        FrontWord w;
        std::istringstream in(text);
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            std::istringstream ls(line);
            std::string tag;
            if (!(ls >> tag)) continue;
            int slot;
            if (!(ls >> slot))
                throw ParseError("front line " + std::to_string(lineno) + ": missing slot index",
                                 lineno);
            FrontEvent::Type t;
            if (tag == "L") t = FrontEvent::Type::LeftCusp;
            else if (tag == "R") t = FrontEvent::Type::RightCusp;
            else if (tag == "X") t = FrontEvent::Type::Crossing;
            else
                throw ParseError("front line " + std::to_string(lineno) + ": unknown event '" +
                                     tag + "'",
                                 lineno);
            w.events.push_back(FrontEvent{t, slot});
        }
        return w;
    }

    static FrontWord from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open front file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return parse(buf.str());
    }
};

// A validated single-component front together with a globally consistent
// orientation of its arcs (maximal strand pieces between cusps).
struct OrientedFront {
    struct Cusp {
        bool left;  // left cusp or right cusp
        int upper;  // arc on the upper branch
        int lower;  // arc on the lower branch
    };
    struct Xing {
        int over;   // arc descending through the crossing (in front)
        int under;  // arc ascending through the crossing
    };

    FrontWord word;
    int n_arcs = 0;
    std::vector<bool> rightward;  // per-arc orientation
    std::vector<Cusp> cusps;
    std::vector<Xing> crossings;

    OrientedFront reversed() const {
        OrientedFront r = *this;
        for (size_t i = 0; i < r.rightward.size(); ++i) r.rightward[i] = !r.rightward[i];
        return r;
    }
};

// Checks slot validity and closure, traces the closed diagram through its
// cusps to count components, and propagates an orientation (arcs meeting at
// a cusp point in opposite horizontal directions).
inline OrientedFront validate(const FrontWord& word) {
    OrientedFront f;
    f.word = word;
    std::vector<int> slots;  // arc id per strand, top to bottom
    int next_arc = 0;
    std::vector<std::vector<int>> adj;  // arc -> arcs sharing a cusp

    for (size_t idx = 0; idx < word.events.size(); ++idx) {
        const FrontEvent& e = word.events[idx];
        int n = static_cast<int>(slots.size());
        switch (e.type) {
        case FrontEvent::Type::LeftCusp: {
            if (e.slot < 0 || e.slot > n)
                throw RuleError("event " + std::to_string(idx + 1) + ": left cusp slot " +
                                std::to_string(e.slot) + " out of range 0.." + std::to_string(n));
            int a = next_arc++, b = next_arc++;
            adj.resize(next_arc);
            adj[a].push_back(b);
            adj[b].push_back(a);
            slots.insert(slots.begin() + e.slot, {a, b});
            f.cusps.push_back({true, a, b});
            break;
        }
        case FrontEvent::Type::RightCusp: {
            if (e.slot < 1 || e.slot > n - 1)
                throw RuleError("event " + std::to_string(idx + 1) + ": right cusp slot " +
                                std::to_string(e.slot) + " out of range 1.." + std::to_string(n - 1));
            int a = slots[e.slot - 1], b = slots[e.slot];
            adj[a].push_back(b);
            adj[b].push_back(a);
            f.cusps.push_back({false, a, b});
            slots.erase(slots.begin() + (e.slot - 1), slots.begin() + (e.slot + 1));
            break;
        }
        case FrontEvent::Type::Crossing: {
            if (e.slot < 1 || e.slot > n - 1)
                throw RuleError("event " + std::to_string(idx + 1) + ": crossing slot " +
                                std::to_string(e.slot) + " out of range 1.." + std::to_string(n - 1));
            // The upper strand descends and is in front (lesser slope).
            f.crossings.push_back({slots[e.slot - 1], slots[e.slot]});
            std::swap(slots[e.slot - 1], slots[e.slot]);
            break;
        }
        }
    }
    if (!slots.empty())
        throw RuleError("strand count ends at " + std::to_string(slots.size()) + ", expected 0");
    if (next_arc == 0) throw RuleError("empty front");

    f.n_arcs = next_arc;

    // Component count and orientation in one sweep: the cusp-adjacency graph
    // is a disjoint union of even cycles, so the alternating 2-coloring
    // (rightward/leftward) always closes up within a component.
    f.rightward.assign(static_cast<size_t>(next_arc), true);
    std::vector<int> comp(static_cast<size_t>(next_arc), -1);
    int n_comp = 0;
    for (int s = 0; s < next_arc; ++s) {
        if (comp[static_cast<size_t>(s)] != -1) continue;
        ++n_comp;
        std::vector<int> stack{s};
        comp[static_cast<size_t>(s)] = n_comp;
        f.rightward[static_cast<size_t>(s)] = true;
        while (!stack.empty()) {
            int a = stack.back();
            stack.pop_back();
            for (int b : adj[static_cast<size_t>(a)]) {
                if (comp[static_cast<size_t>(b)] == -1) {
                    comp[static_cast<size_t>(b)] = n_comp;
                    f.rightward[static_cast<size_t>(b)] = !f.rightward[static_cast<size_t>(a)];
                    stack.push_back(b);
                }
            }
        }
    }
    if (n_comp != 1)
        throw RuleError("front has " + std::to_string(n_comp) + " components, expected 1");
    return f;
}

// tb = writhe - (number of cusps)/2; rot = (down cusps - up cusps)/2.
// A crossing is positive exactly when its two strands run in the same
// horizontal direction; a cusp is "down" when the orientation traverses it
// from the upper branch to the lower branch.
inline std::pair<int, int> tb_rot(const OrientedFront& f) {
    int writhe = 0;
    for (const auto& x : f.crossings)
        writhe += (f.rightward[static_cast<size_t>(x.over)] ==
                   f.rightward[static_cast<size_t>(x.under)])
                      ? 1
                      : -1;
    int down = 0, up = 0;
    for (const auto& c : f.cusps) {
        bool upper_right = f.rightward[static_cast<size_t>(c.upper)];
        bool is_down = c.left ? !upper_right : upper_right;
        (is_down ? down : up) += 1;
    }
    int tb = writhe - static_cast<int>(f.cusps.size()) / 2;
    int rot = (down - up) / 2;
    return {tb, rot};
}

// A strand location inside a front word: insert before event index
// `event_pos`, acting on strand slot `slot` at that point.
struct FrontSegment {
    size_t event_pos = 0;
    int slot = 1;
};

namespace detail {
// Strand count just before each event (plus the final count at the end).
inline std::vector<int> strand_counts(const FrontWord& w) {
    std::vector<int> counts;
    int n = 0;
    for (const auto& e : w.events) {
        counts.push_back(n);
        switch (e.type) {
        case FrontEvent::Type::LeftCusp: n += 2; break;
        case FrontEvent::Type::RightCusp: n -= 2; break;
        case FrontEvent::Type::Crossing: break;
        }
    }
    counts.push_back(n);
    return counts;
}
} // namespace detail

// Inserts a two-cusp zigzag on the chosen strand. sign=+1 must change
// (tb, rot) by (-1, +1) and sign=-1 by (-1, -1); which of the two zigzag
// shapes realizes the sign depends on the strand's direction, so both are
// tried against the required rotation change.
inline OrientedFront stabilize_front(const OrientedFront& f, int sign, FrontSegment seg) {
    if (sign != 1 && sign != -1) throw RuleError("stabilize_front: sign must be +1 or -1");
    std::vector<int> counts = detail::strand_counts(f.word);
    if (seg.event_pos > f.word.events.size())
        throw RuleError("stabilize_front: event position " + std::to_string(seg.event_pos) +
                        " out of range");
    int n = counts[seg.event_pos];
    if (seg.slot < 1 || seg.slot > n)
        throw RuleError("stabilize_front: slot " + std::to_string(seg.slot) +
                        " out of range 1.." + std::to_string(n));

    auto [tb0, rot0] = tb_rot(f);
    int s = seg.slot;
    const std::vector<std::vector<FrontEvent>> zigzags = {
        {{FrontEvent::Type::LeftCusp, s}, {FrontEvent::Type::RightCusp, s}},
        {{FrontEvent::Type::LeftCusp, s - 1}, {FrontEvent::Type::RightCusp, s + 1}},
    };
    for (const auto& zz : zigzags) {
        FrontWord w = f.word;
        w.events.insert(w.events.begin() + static_cast<long>(seg.event_pos), zz.begin(), zz.end());
        OrientedFront g = validate(w);
        auto [tb1, rot1] = tb_rot(g);
        if (tb1 == tb0 - 1 && rot1 == rot0 + sign) return g;
    }
    throw RuleError("stabilize_front: internal error, no zigzag realizes the requested sign");
}

namespace detail {
// Vertical flip: slot j -> n+1-j with n strands present. Preserves tb,
// negates rot.
inline FrontWord vflip(const FrontWord& w) {
    std::vector<int> counts = strand_counts(w);
    FrontWord out;
    for (size_t i = 0; i < w.events.size(); ++i) {
        int n = counts[i];
        FrontEvent e = w.events[i];
        e.slot = n - e.slot;
        out.events.push_back(e);
    }
    return out;
}

// Head-to-tail orientation parity: +1 when the propagated orientation makes
// the upper arc at the final right cusp rightward (like the seed arc at the
// first left cusp). Splicing a second front onto the tail preserves that
// front's seed convention exactly when this is +1; otherwise the forced
// traversal reverses it and the spliced diagram picks up -rot instead.
inline int head_tail_parity(const OrientedFront& f) {
    return f.rightward[static_cast<size_t>(f.cusps.back().upper)] ? 1 : -1;
}

// Joins the words end to end, dropping a's final right cusp and b's initial
// left cusp (every valid word ends with "R 1" and starts with "L 0").
inline FrontWord splice_words(const FrontWord& a, const FrontWord& b) {
    FrontWord w;
    w.events.assign(a.events.begin(), a.events.end() - 1);
    w.events.insert(w.events.end(), b.events.begin() + 1, b.events.end());
    return w;
}

// One-crossing unknot front with tb = -1, rot = 0 whose head-to-tail parity
// is -1. Splicing it onto a front's tail keeps (tb, rot) and flips the
// parity.
inline FrontWord parity_flip_unknot() {
    FrontWord w;
    w.events = {{FrontEvent::Type::LeftCusp, 0},
                {FrontEvent::Type::LeftCusp, 2},
                {FrontEvent::Type::Crossing, 2},
                {FrontEvent::Type::RightCusp, 1},
                {FrontEvent::Type::RightCusp, 1}};
    return w;
}
} // namespace detail

// Splices the final right cusp of f1 to the leftmost left cusp of f2 so that
// (tb, rot) = (tb1 + tb2 + 1, rot1 + rot2). The raw splice contributes
// rot1 + p*rot2 where p is f1's head-to-tail orientation parity, so when
// p = -1 a parity-flipping unknot summand (tb -1, rot 0) is spliced onto f1
// first.
inline OrientedFront connect_sum_front(const OrientedFront& f1, const OrientedFront& f2) {
    if (f1.word.events.empty() || f2.word.events.empty())
        throw RuleError("connect_sum_front: empty front");
    auto [tb1, rot1] = tb_rot(f1);
    auto [tb2, rot2] = tb_rot(f2);

    FrontWord first = f1.word;
    if (detail::head_tail_parity(f1) == -1)
        first = detail::splice_words(first, detail::parity_flip_unknot());
    OrientedFront g = validate(detail::splice_words(first, f2.word));
    auto [tb, rot] = tb_rot(g);
    if (tb != tb1 + tb2 + 1 || rot != rot1 + rot2)
        throw RuleError("connect_sum_front: internal error, splice does not realize the sum rule");
    return g;
}

inline OrientedFront unknot_front() {
    FrontWord w;
    w.events = {{FrontEvent::Type::LeftCusp, 0}, {FrontEvent::Type::RightCusp, 1}};
    return validate(w);
}

// Front of the positive (p, q) torus knot: p nested left cusps, the braid
// pattern on the top p strands, p right cusps.
inline OrientedFront torus_front(int p, int q) {
    if (p < 2 || q < 2) throw RuleError("torus_front: parameters must be at least 2");
    FrontWord w;
    for (int i = 0; i < p; ++i) w.events.push_back({FrontEvent::Type::LeftCusp, i});
    for (int rep = 0; rep < q; ++rep)
        for (int i = p - 1; i >= 1; --i) w.events.push_back({FrontEvent::Type::Crossing, i});
    for (int i = p; i >= 1; --i) w.events.push_back({FrontEvent::Type::RightCusp, i});
    return validate(w);
}

inline OrientedFront rht_front() { return torus_front(2, 3); }

// Deterministic-per-seed random valid front with roughly `size` events.
inline OrientedFront random_front(unsigned seed, int size) {
    if (size < 2) throw RuleError("random_front: size must be at least 2");
    std::mt19937 rng(seed);
    for (int attempt = 0; attempt < 10000; ++attempt) {
        FrontWord w;
        int count = 0;
        int budget = size + static_cast<int>(rng() % 4);
        while (true) {
            int remaining = budget - static_cast<int>(w.events.size());
            if (count == 0 && remaining <= 0) break;
            if (remaining <= count / 2) {
                // Out of budget: close everything up.
                while (count > 0) {
                    int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(count - 1));
                    w.events.push_back({FrontEvent::Type::RightCusp, i});
                    count -= 2;
                }
                break;
            }
            unsigned choice = rng() % 4;
            if (count < 2 || choice == 0) {
                int i = static_cast<int>(rng() % static_cast<unsigned>(count + 1));
                w.events.push_back({FrontEvent::Type::LeftCusp, i});
                count += 2;
            } else if (choice == 1) {
                int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(count - 1));
                w.events.push_back({FrontEvent::Type::RightCusp, i});
                count -= 2;
            } else {
                int i = 1 + static_cast<int>(rng() % static_cast<unsigned>(count - 1));
                w.events.push_back({FrontEvent::Type::Crossing, i});
            }
        }
        if (w.events.empty()) continue;
        try {
            return validate(w);
        } catch (const RuleError&) {
            continue;  // usually a multi-component diagram; draw again
        }
    }
    throw RuleError("random_front: failed to generate a single-component front");
}

} // namespace knotcert
