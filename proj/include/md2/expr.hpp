#pragma once
// Arithmetic expression trees used as evolvable MCTS tree policies.
//
// Internal nodes are the binary operators + - * /; leaves are either constants
// in [-1, 1] or one of twelve gameplay variables. Division is protected (a
// near-zero denominator yields 0), and any operator whose result is not finite
// also yields 0, so evaluation is total. Trees are depth-capped at 8, which
// bounds them to at most 255 elements.
//
// Text form is fully parenthesized infix, e.g. "((PE + 1) * ST)"; a bare leaf
// is also a valid expression. The mean-reward variable prints as "R" and may
// be written with a combining macron in input.

#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "md2/rng.hpp"

namespace md2 {

enum class Var : std::uint8_t {
    StepsTaken = 0,     // ST
    ExitProximity,      // PE
    PotionsDrunk,       // PD (ratio)
    TreasuresOpened,    // TO (ratio)
    MinitaursKnocked,   // MTK
    MonstersSlain,      // MS (ratio)
    JavelinsThrown,     // JT
    HealthLeft,         // HL
    TeleportsUsed,      // TU
    TrapsSprung,        // TS
    MeanReward,         // R: node's accumulated reward / visits
    InteractionRatio,   // IC
};

inline constexpr int kVarCount = 12;

inline constexpr const char* kVarNames[kVarCount] = {
    "ST", "PE", "PD", "TO", "MTK", "MS", "JT", "HL", "TU", "TS", "R", "IC"};

using Bindings = std::array<double, kVarCount>;

enum class Op : std::uint8_t { Add = 0, Sub, Mul, Div };

inline char op_glyph(Op op) {
    switch (op) {
    case Op::Add: return '+';
    case Op::Sub: return '-';
    case Op::Mul: return '*';
    case Op::Div: return '/';
    }
    return '?';
}

inline constexpr int kMaxTreeDepth = 8;
inline constexpr double kDivisionEpsilon = 1e-9;

class ExprParseError : public std::runtime_error {
public:
    ExprParseError(const std::string& msg, std::size_t offset)
        : std::runtime_error(msg + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class ExprTree {
public:
    struct Node {
        enum class Kind : std::uint8_t { Constant, Variable, Operator };
        Kind kind = Kind::Constant;
        Op op = Op::Add;
        Var var = Var::StepsTaken;
        double value = 0.0;
        std::int16_t left = -1;
        std::int16_t right = -1;
    };

    ExprTree() { nodes_.push_back(Node{}); }  // the zero constant

    static ExprTree constant(double v) {
        ExprTree t;
        t.nodes_[0].value = v;
        return t;
    }

    static ExprTree variable(Var v) {
        ExprTree t;
        t.nodes_[0].kind = Node::Kind::Variable;
        t.nodes_[0].var = v;
        return t;
    }

    static ExprTree compose(Op op, const ExprTree& lhs, const ExprTree& rhs) {
        ExprTree t;
        t.nodes_.clear();
        Node root;
        root.kind = Node::Kind::Operator;
        root.op = op;
        t.nodes_.push_back(root);
        t.nodes_[0].left = t.graft(lhs, lhs.root_);
        t.nodes_[0].right = t.graft(rhs, rhs.root_);
        return t;
    }

    int size() const { return int(nodes_.size()); }
    int depth() const { return depth_of(root_); }

    double evaluate(const Bindings& bindings) const { return eval_node(root_, bindings); }

    // Grow-style initialization: internal nodes are forced while the level is
    // below min_depth, leaves are forced at max_depth, and in between the
    // builder picks operator or leaf with equal probability. Leaves are a
    // 50/50 choice between a uniform constant in [-1, 1] and a uniform
    // variable.
    static ExprTree random(Rng& rng, int min_depth = 2, int max_depth = 5) {
        assert(min_depth >= 1 && min_depth <= max_depth && max_depth <= kMaxTreeDepth);
        ExprTree t;
        t.nodes_.clear();
        t.root_ = t.grow(rng, 1, min_depth, max_depth);
        return t;
    }

    // Full-replacement mutation: the chromosome is discarded for a fresh
    // random tree drawn like the initial population.
    static ExprTree mutate(const ExprTree&, Rng& rng) { return random(rng); }

    // Subtree-swap crossover with uniform node choice in each parent. Both
    // offspring must respect the depth cap; otherwise the node choices are
    // redrawn, and after `retries` failures the parents are returned as-is.
    static std::pair<ExprTree, ExprTree> crossover(const ExprTree& a, const ExprTree& b, Rng& rng,
                                                   int retries = 20) {
        for (int attempt = 0; attempt < retries; ++attempt) {
            int cut_a = int(rng.index(a.nodes_.size()));
            int cut_b = int(rng.index(b.nodes_.size()));
            ExprTree child_a = a.replace_subtree(cut_a, b, cut_b);
            ExprTree child_b = b.replace_subtree(cut_b, a, cut_a);
            if (child_a.depth() <= kMaxTreeDepth && child_b.depth() <= kMaxTreeDepth) {
                return {std::move(child_a), std::move(child_b)};
            }
        }
        return {a, b};
    }

    std::string format() const {
        std::string out;
        format_node(root_, out);
        return out;
    }

    static ExprTree parse(std::string_view text) {
        Parser p{text, 0};
        ExprTree t;
        t.nodes_.clear();
        t.root_ = t.parse_node(p);
        p.skip_spaces();
        if (p.pos != text.size()) throw ExprParseError("trailing input", p.pos);
        return t;
    }

    friend bool operator==(const ExprTree& a, const ExprTree& b) {
        return a.equal_nodes(a.root_, b, b.root_);
    }

private:
    struct Parser {
        std::string_view text;
        std::size_t pos;

        void skip_spaces() {
            while (pos < text.size() && text[pos] == ' ') ++pos;
        }
        char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    };

    std::int16_t add_node(Node n) {
        nodes_.push_back(n);
        return std::int16_t(nodes_.size() - 1);
    }

    // Deep-copies `src`'s subtree rooted at src_idx into this tree.
    std::int16_t graft(const ExprTree& src, std::int16_t src_idx) {
        const Node& n = src.nodes_[src_idx];
        Node copy = n;
        if (n.kind == Node::Kind::Operator) {
            copy.left = graft(src, n.left);
            copy.right = graft(src, n.right);
        }
        return add_node(copy);
    }

    // Copy of this tree with the subtree at `cut` replaced by donor@donor_cut.
    ExprTree replace_subtree(int cut, const ExprTree& donor, int donor_cut) const {
        ExprTree out;
        out.nodes_.clear();
        out.root_ = out.graft_replacing(*this, root_, std::int16_t(cut), donor,
                                        std::int16_t(donor_cut));
        return out;
    }

    std::int16_t graft_replacing(const ExprTree& src, std::int16_t idx, std::int16_t cut,
                                 const ExprTree& donor, std::int16_t donor_cut) {
        if (idx == cut) return graft(donor, donor_cut);
        const Node& n = src.nodes_[idx];
        Node copy = n;
        if (n.kind == Node::Kind::Operator) {
            copy.left = graft_replacing(src, n.left, cut, donor, donor_cut);
            copy.right = graft_replacing(src, n.right, cut, donor, donor_cut);
        }
        return add_node(copy);
    }

    int depth_of(std::int16_t idx) const {
        const Node& n = nodes_[idx];
        if (n.kind != Node::Kind::Operator) return 1;
        return 1 + std::max(depth_of(n.left), depth_of(n.right));
    }

    double eval_node(std::int16_t idx, const Bindings& b) const {
        const Node& n = nodes_[idx];
        switch (n.kind) {
        case Node::Kind::Constant: return n.value;
        case Node::Kind::Variable: return b[std::size_t(n.var)];
        case Node::Kind::Operator: break;
        }
        double l = eval_node(n.left, b);
        double r = eval_node(n.right, b);
        double v = 0.0;
        switch (n.op) {
        case Op::Add: v = l + r; break;
        case Op::Sub: v = l - r; break;
        case Op::Mul: v = l * r; break;
        case Op::Div: v = std::abs(r) < kDivisionEpsilon ? 0.0 : l / r; break;
        }
        return std::isfinite(v) ? v : 0.0;
    }

    std::int16_t grow(Rng& rng, int level, int min_depth, int max_depth) {
        bool make_op;
        if (level < min_depth) {
            make_op = true;
        } else if (level >= max_depth) {
            make_op = false;
        } else {
            make_op = rng.chance(0.5);
        }
        Node n;
        if (make_op) {
            n.kind = Node::Kind::Operator;
            n.op = Op(rng.index(4));
            std::int16_t left = grow(rng, level + 1, min_depth, max_depth);
            std::int16_t right = grow(rng, level + 1, min_depth, max_depth);
            n.left = left;
            n.right = right;
        } else if (rng.chance(0.5)) {
            n.kind = Node::Kind::Constant;
            n.value = rng.uniform(-1.0, 1.0);
        } else {
            n.kind = Node::Kind::Variable;
            n.var = Var(rng.index(kVarCount));
        }
        return add_node(n);
    }

    void format_node(std::int16_t idx, std::string& out) const {
        const Node& n = nodes_[idx];
        switch (n.kind) {
        case Node::Kind::Constant: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, n.value);
            out.append(buf, res.ptr);
            return;
        }
        case Node::Kind::Variable:
            out += kVarNames[std::size_t(n.var)];
            return;
        case Node::Kind::Operator:
            out += '(';
            format_node(n.left, out);
            out += ' ';
            out += op_glyph(n.op);
            out += ' ';
            format_node(n.right, out);
            out += ')';
            return;
        }
    }

    std::int16_t parse_node(Parser& p) {
        p.skip_spaces();
        char c = p.peek();
        if (c == '(') {
            ++p.pos;
            std::int16_t left = parse_node(p);
            p.skip_spaces();
            Op op;
            switch (p.peek()) {
            case '+': op = Op::Add; break;
            case '-': op = Op::Sub; break;
            case '*': op = Op::Mul; break;
            case '/': op = Op::Div; break;
            default: throw ExprParseError("expected an operator", p.pos);
            }
            ++p.pos;
            std::int16_t right = parse_node(p);
            p.skip_spaces();
            if (p.peek() != ')') throw ExprParseError("expected ')'", p.pos);
            ++p.pos;
            Node n;
            n.kind = Node::Kind::Operator;
            n.op = op;
            n.left = left;
            n.right = right;
            return add_node(n);
        }
        if ((c >= 'A' && c <= 'Z')) return parse_leaf_variable(p);
        if (c == '-' || c == '.' || (c >= '0' && c <= '9')) return parse_leaf_constant(p);
        throw ExprParseError("expected '(', a variable or a constant", p.pos);
    }

    std::int16_t parse_leaf_variable(Parser& p) {
        std::size_t start = p.pos;
        while (p.pos < p.text.size() && p.text[p.pos] >= 'A' && p.text[p.pos] <= 'Z') ++p.pos;
        std::string_view word = p.text.substr(start, p.pos - start);
        // Accept the combining macron (UTF-8 0xCC 0x84) after R.
        if (word == "R" && p.pos + 1 < p.text.size() && std::uint8_t(p.text[p.pos]) == 0xcc &&
            std::uint8_t(p.text[p.pos + 1]) == 0x84) {
            p.pos += 2;
        }
        for (int v = 0; v < kVarCount; ++v) {
            if (word == kVarNames[v]) {
                Node n;
                n.kind = Node::Kind::Variable;
                n.var = Var(v);
                return add_node(n);
            }
        }
        throw ExprParseError("unknown variable '" + std::string(word) + "'", start);
    }

    std::int16_t parse_leaf_constant(Parser& p) {
        const char* begin = p.text.data() + p.pos;
        const char* end = p.text.data() + p.text.size();
        double value = 0.0;
        auto res = std::from_chars(begin, end, value);
        if (res.ec != std::errc{}) throw ExprParseError("malformed constant", p.pos);
        p.pos = std::size_t(res.ptr - p.text.data());
        Node n;
        n.kind = Node::Kind::Constant;
        n.value = value;
        return add_node(n);
    }

    bool equal_nodes(std::int16_t ia, const ExprTree& other, std::int16_t ib) const {
        const Node& a = nodes_[ia];
        const Node& b = other.nodes_[ib];
        if (a.kind != b.kind) return false;
        switch (a.kind) {
        case Node::Kind::Constant: return a.value == b.value;
        case Node::Kind::Variable: return a.var == b.var;
        case Node::Kind::Operator:
            return a.op == b.op && equal_nodes(a.left, other, b.left) &&
                   equal_nodes(a.right, other, b.right);
        }
        return false;
    }

    std::vector<Node> nodes_;
    std::int16_t root_ = 0;
};

}  // namespace md2
