#include "dsq/tree.hpp"

#include "dsq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace dsq {

bool operator==(const DecisionTree::Branch& a, const DecisionTree::Branch& b) {
    return a.value == b.value && a.child == b.child;
}

bool operator==(const DecisionTree::Node& a, const DecisionTree::Node& b) {
    if (a.leaf != b.leaf) return false;
    if (a.leaf) return a.label == b.label;
    return a.feature == b.feature && a.branches == b.branches;
}

bool DecisionTree::operator==(const DecisionTree& other) const { return nodes_ == other.nodes_; }

DecisionTree DecisionTree::leaf(Label l) {
    DecisionTree t;
    t.add_leaf(l);
    return t;
}

int DecisionTree::add_leaf(Label l) {
    Node n;
    n.label = l;
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

int DecisionTree::add_split(Feature f) {
    Node n;
    n.leaf = false;
    n.feature = f;
    nodes_.push_back(n);
    return static_cast<int>(nodes_.size() - 1);
}

void DecisionTree::add_branch(int node, int value, int child) {
    nodes_[static_cast<std::size_t>(node)].branches.push_back({value, child});
}

int DecisionTree::depth() const {
    auto rec = [&](auto&& self, int i) -> int {
        const Node& n = node(i);
        if (n.leaf) return 0;
        int d = 0;
        for (const Branch& b : n.branches) d = std::max(d, self(self, b.child));
        return d + 1;
    };
    return nodes_.empty() ? 0 : rec(rec, 0);
}

Label DecisionTree::classify(const FeatureVector& v) const {
    int i = 0;
    while (!node(i).leaf) {
        const Node& n = node(i);
        const int x = v[n.feature];
        int next = -1;
        if (is_numeric(n.feature)) {
            if (n.branches.size() == 2) next = x <= n.branches[0].value ? n.branches[0].child : n.branches[1].child;
        } else {
            for (const Branch& b : n.branches)
                if (b.value == x) next = b.child;
        }
        if (next < 0)
            throw Error(ErrorKind::Validation, "no branch for " + std::string(feature_name(n.feature)) + " = " +
                                                   feature_value_name(n.feature, x));
        i = next;
    }
    return node(i).label;
}

// Text form ----------------------------------------------------------------------

std::string DecisionTree::to_text() const {
    std::ostringstream out;
    auto rec = [&](auto&& self, int i, int indent) -> void {
        const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
        const Node& n = node(i);
        if (n.leaf) {
            out << pad << "-> " << label_name(n.label) << '\n';
            return;
        }
        out << pad << "? " << feature_name(n.feature) << '\n';
        for (std::size_t k = 0; k < n.branches.size(); ++k) {
            const Branch& b = n.branches[k];
            if (is_numeric(n.feature))
                out << pad << (k == 0 ? "<= " : "> ") << b.value << " :\n";
            else
                out << pad << "= " << feature_value_name(n.feature, b.value) << " :\n";
            self(self, b.child, indent + 1);
        }
    };
    if (!nodes_.empty()) rec(rec, 0, 0);
    return out.str();
}

namespace {

struct Line {
    int indent;
    std::string text;
    std::size_t offset;
};

class TreeParser {
public:
    explicit TreeParser(std::string_view text) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            std::size_t end = text.find('\n', pos);
            if (end == std::string_view::npos) end = text.size();
            std::string_view raw = text.substr(pos, end - pos);
            if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
            const std::size_t first = raw.find_first_not_of(' ');
            if (first != std::string_view::npos) {
                std::string body(raw.substr(first));
                while (!body.empty() && body.back() == ' ') body.pop_back();
                lines_.push_back({static_cast<int>(first), body, pos + first});
            }
            pos = end + 1;
        }
    }

    DecisionTree run() {
        if (lines_.empty()) throw ParseError(0, "empty tree");
        parse_node(lines_[0].indent);
        if (next_ != lines_.size()) fail("unexpected line '" + lines_[next_].text + "'");
        return tree_;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        const std::size_t at = next_ < lines_.size() ? lines_[next_].offset : 0;
        throw ParseError(at, what);
    }

    int parse_node(int indent) {
        if (next_ >= lines_.size()) fail("tree ends where a node was expected");
        const Line& line = lines_[next_];
        if (line.indent != indent) fail("bad indentation");
        if (line.text.rfind("-> ", 0) == 0) {
            const auto label = label_from_name(line.text.substr(3));
            if (!label) fail("unknown label '" + line.text.substr(3) + "'");
            ++next_;
            return tree_.add_leaf(*label);
        }
        if (line.text.rfind("? ", 0) != 0) fail("expected '? feature' or '-> label'");
        const auto feature = feature_from_name(line.text.substr(2));
        if (!feature) fail("unknown feature '" + line.text.substr(2) + "'");
        ++next_;
        const int id = tree_.add_split(*feature);
        std::vector<int> seen;
        while (next_ < lines_.size() && lines_[next_].indent == indent) {
            const std::string& t = lines_[next_].text;
            if (t.size() < 2 || t.substr(t.size() - 2) != " :") break;
            const std::string head = t.substr(0, t.size() - 2);
            int value = 0;
            if (is_numeric(*feature)) {
                const bool le = head.rfind("<= ", 0) == 0;
                const bool gt = head.rfind("> ", 0) == 0;
                if ((seen.empty() && !le) || (seen.size() == 1 && !gt) || seen.size() >= 2)
                    fail("numeric split needs '<= t :' then '> t :'");
                try {
                    value = std::stoi(head.substr(le ? 3 : 2));
                } catch (const std::exception&) {
                    fail("bad threshold");
                }
                if (gt && value != seen[0]) fail("thresholds of one split differ");
            } else {
                if (head.rfind("= ", 0) != 0) fail("expected '= value :'");
                try {
                    value = parse_feature_value(*feature, head.substr(2));
                } catch (const ParseError& e) {
                    fail(e.what());
                }
                if (std::find(seen.begin(), seen.end(), value) != seen.end()) fail("value repeated at one node");
            }
            seen.push_back(value);
            ++next_;
            const int child = parse_node(indent + 2);
            tree_.add_branch(id, value, child);
        }
        if (seen.empty()) fail("split without branches");
        if (is_numeric(*feature) && seen.size() != 2) fail("numeric split needs two branches");
        return id;
    }

    std::vector<Line> lines_;
    std::size_t next_ = 0;
    DecisionTree tree_;
};

// Induction ----------------------------------------------------------------------

using Counts = std::array<std::size_t, 3>;

Counts count_labels(std::span<const LabeledExample* const> set) {
    Counts c{};
    for (const LabeledExample* e : set) ++c[static_cast<std::size_t>(e->label)];
    return c;
}

double entropy(const Counts& c) {
    const double n = static_cast<double>(c[0] + c[1] + c[2]);
    double h = 0;
    for (std::size_t k : c)
        if (k) {
            const double p = static_cast<double>(k) / n;
            h -= p * std::log2(p);
        }
    return h;
}

Label majority(const Counts& c) {
    // Ties prefer WhiteWin, then Draw, then BlackWin.
    Label best = Label::WhiteWin;
    for (Label l : {Label::Draw, Label::BlackWin})
        if (c[static_cast<std::size_t>(l)] > c[static_cast<std::size_t>(best)]) best = l;
    return best;
}

struct Split {
    Feature feature;
    double gain = -1;
    int threshold = 0;
};

Split best_split(std::span<const LabeledExample* const> set, Feature f, double base) {
    Split s{f};
    const double n = static_cast<double>(set.size());
    std::map<int, Counts> by_value;
    for (const LabeledExample* e : set) ++by_value[e->features[f]][static_cast<std::size_t>(e->label)];
    if (!is_numeric(f)) {
        double rest = 0;
        for (const auto& [v, c] : by_value) rest += static_cast<double>(c[0] + c[1] + c[2]) / n * entropy(c);
        s.gain = base - rest;
        return s;
    }
    Counts below{};
    Counts total = count_labels(set);
    for (auto it = by_value.begin(); it != by_value.end(); ++it) {
        if (std::next(it) == by_value.end()) break;
        for (std::size_t k = 0; k < 3; ++k) below[k] += it->second[k];
        Counts above{};
        for (std::size_t k = 0; k < 3; ++k) above[k] = total[k] - below[k];
        const double nb = static_cast<double>(below[0] + below[1] + below[2]);
        const double gain = base - nb / n * entropy(below) - (n - nb) / n * entropy(above);
        if (gain > s.gain + 1e-12) {
            s.gain = gain;
            s.threshold = it->first;
        }
    }
    return s;
}

int grow(DecisionTree& tree, std::vector<const LabeledExample*> set, std::vector<Feature> features,
         const Counts& parent) {
    const Counts c = set.empty() ? parent : count_labels(set);
    const Label label = majority(c);
    const int nonzero = (c[0] > 0) + (c[1] > 0) + (c[2] > 0);
    if (set.empty() || nonzero <= 1 || features.empty()) return tree.add_leaf(label);

    const double base = entropy(c);
    Split best{features.front()};
    for (Feature f : features) {
        const Split s = best_split(set, f, base);
        if (s.gain > best.gain + 1e-12) best = s;
    }
    if (best.gain <= 1e-12) return tree.add_leaf(label);

    const int id = tree.add_split(best.feature);
    features.erase(std::find(features.begin(), features.end(), best.feature));
    if (is_numeric(best.feature)) {
        std::vector<const LabeledExample*> le, gt;
        for (const LabeledExample* e : set) (e->features[best.feature] <= best.threshold ? le : gt).push_back(e);
        const int a = grow(tree, std::move(le), features, c);
        tree.add_branch(id, best.threshold, a);
        const int b = grow(tree, std::move(gt), features, c);
        tree.add_branch(id, best.threshold, b);
        return id;
    }
    for (int v : feature_domain(best.feature)) {
        std::vector<const LabeledExample*> part;
        for (const LabeledExample* e : set)
            if (e->features[best.feature] == v) part.push_back(e);
        const int child = grow(tree, std::move(part), features, c);
        tree.add_branch(id, v, child);
    }
    return id;
}

}  // namespace

DecisionTree DecisionTree::parse(std::string_view text) { return TreeParser(text).run(); }

DecisionTree induce_tree(std::span<const LabeledExample> examples, std::span<const Feature> features) {
    if (examples.empty()) throw Error(ErrorKind::Validation, "no examples to learn from");
    std::vector<Feature> fs(features.begin(), features.end());
    if (fs.empty()) fs.assign(kAllFeatures.begin(), kAllFeatures.end());
    std::vector<const LabeledExample*> set;
    set.reserve(examples.size());
    for (const LabeledExample& e : examples) set.push_back(&e);
    DecisionTree tree;
    grow(tree, std::move(set), std::move(fs), {});
    return tree;
}

std::uint64_t misclassified(const DecisionTree& tree, std::span<const LabeledExample> examples) {
    std::uint64_t n = 0;
    for (const LabeledExample& e : examples)
        if (tree.classify(e.features) != e.label) ++n;
    return n;
}

std::uint64_t evaluate_tree(const DecisionTree& tree, const Tablebase& tb) {
    const auto examples = examples_from(tb);
    return misclassified(tree, examples);
}

// Published trees ------------------------------------------------------------------

namespace {

constexpr int kTrue = 1, kFalse = 0;
constexpr int kWhite = 0, kBlack = 1;
constexpr int kTop = 0, kMid = 1, kBot = 2;

}  // namespace

DecisionTree equal_material_tree() {
    return DecisionTree::parse(R"(? closest
= white :
  ? unopposed_w
  = true :
    -> white
  = false :
    ? parity
    = 0 :
      -> black
    = 1 :
      -> white
= black :
  ? unopposed_b
  = true :
    -> black
  = false :
    ? parity
    = 0 :
      -> black
    = 1 :
      -> white
)");
}

DecisionTree black_stronger_tree() {
    return DecisionTree::parse(R"(? closest
= white :
  ? unopposed_w
  = true :
    -> white
  = false :
    ? parity
    = 0 :
      -> black
    = 1 :
      ? can_cross
      = true :
        -> draw
      = false :
        ? distance_p
        <= 10 :
          -> black
        > 10 :
          ? distance_d
          <= 3 :
            -> black
          > 3 :
            -> draw
= black :
  ? adjacent
  = true :
    ? trapped
    = true :
      -> white
    = false :
      -> black
  = false :
    -> black
)");
}

DecisionTree lion_elephant_tree() {
    // The drawing leaves the sector_w edges other than "mid" unlabeled; both
    // lead to a draw.
    DecisionTree t;
    const int root = t.add_split(Feature::Closest);
    const int unopposed = t.add_split(Feature::UnopposedW);
    t.add_branch(root, kWhite, unopposed);
    t.add_branch(unopposed, kTrue, t.add_leaf(Label::WhiteWin));
    const int sector_b = t.add_split(Feature::SectorB);
    t.add_branch(unopposed, kFalse, sector_b);
    t.add_branch(sector_b, kTop, t.add_leaf(Label::Draw));
    for (int s : {kMid, kBot}) {
        const int sector_w = t.add_split(Feature::SectorW);
        t.add_branch(sector_b, s, sector_w);
        t.add_branch(sector_w, kTop, t.add_leaf(Label::Draw));
        t.add_branch(sector_w, kMid, t.add_leaf(Label::BlackWin));
        t.add_branch(sector_w, kBot, t.add_leaf(Label::Draw));
    }
    const int adjacent = t.add_split(Feature::Adjacent);
    t.add_branch(root, kBlack, adjacent);
    const int trapped = t.add_split(Feature::Trapped);
    t.add_branch(adjacent, kTrue, trapped);
    t.add_branch(trapped, kTrue, t.add_leaf(Label::WhiteWin));
    t.add_branch(trapped, kFalse, t.add_leaf(Label::BlackWin));
    t.add_branch(adjacent, kFalse, t.add_leaf(Label::BlackWin));
    return t;
}

}  // namespace dsq
