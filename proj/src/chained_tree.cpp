#include "cfpo/chained_tree.hpp"

#include <algorithm>

namespace cfpo {

namespace {

std::vector<std::vector<int>> maximal_chains(const Poset& p) {
    // every maximal chain of a rooted tree runs root -> some maximal element
    const int n = static_cast<int>(p.size());
    std::vector<std::vector<int>> chains;
    for (int top = 0; top < n; ++top) {
        bool is_max = true;
        for (int j = 0; j < n && is_max; ++j)
            if (p.less(top, j)) is_max = false;
        if (!is_max) continue;
        std::vector<int> down;
        for (int j = 0; j < n; ++j)
            if (j == top || p.less(j, top)) down.push_back(j);
        chains.push_back(std::move(down));
    }
    return chains;
}

} // namespace

std::vector<std::string> ChainedTree::chain_bottom_up() const {
    std::vector<std::string> out = chain;
    std::sort(out.begin(), out.end(), [&](const std::string& a, const std::string& b) {
        return base.less(a, b);
    });
    return out;
}

ChainedTree ChainedTree::make(Poset base, std::optional<std::string> root,
                              std::vector<std::string> chain) {
    ChainedTree t;
    t.base = std::move(base);
    if (t.base.empty()) return t;

    if (root) {
        t.root = *root;
    } else {
        for (const auto& e : t.base.elements()) {
            bool minimal = true;
            for (const auto& f : t.base.elements())
                if (t.base.less(f, e)) minimal = false;
            if (minimal) {
                if (!t.root.empty()) throw InputError("tree has no unique minimal element");
                t.root = e;
            }
        }
    }

    if (!chain.empty()) {
        std::sort(chain.begin(), chain.end());
        t.chain = std::move(chain);
    } else {
        auto chains = maximal_chains(t.base);
        if (chains.size() == 1) {
            for (int i : chains.front()) t.chain.push_back(t.base.name_of(i));
            std::sort(t.chain.begin(), t.chain.end());
        }
    }
    return t;
}

std::optional<TreeViolation> validate_tree(const ChainedTree& t) {
    if (t.base.empty()) {
        if (!t.root.empty() || !t.chain.empty())
            return TreeViolation{"empty tree carries a root or chain"};
        return std::nullopt;
    }
    const int n = static_cast<int>(t.base.size());
    int root = t.base.index_of(t.root);
    if (root < 0) return TreeViolation{"root '" + t.root + "' is not an element"};

    for (int i = 0; i < n; ++i) {
        if (i == root) continue;
        if (!t.base.less(root, i))
            return TreeViolation{"root is not below element '" + t.base.name_of(i) + "'"};
    }

    // semilinearity: strict down-sets are chains
    for (int i = 0; i < n; ++i) {
        std::vector<int> down;
        for (int j = 0; j < n; ++j)
            if (t.base.less(j, i)) down.push_back(j);
        for (std::size_t a = 0; a < down.size(); ++a)
            for (std::size_t b = a + 1; b < down.size(); ++b)
                if (!t.base.comparable(down[a], down[b]))
                    return TreeViolation{"down-set of '" + t.base.name_of(i) +
                                         "' is not a chain ('" + t.base.name_of(down[a]) +
                                         "' || '" + t.base.name_of(down[b]) + "')"};
    }

    if (!t.chain.empty()) {
        std::vector<int> ch;
        for (const auto& e : t.chain) {
            int i = t.base.index_of(e);
            if (i < 0) return TreeViolation{"chain element '" + e + "' is not an element"};
            ch.push_back(i);
        }
        if (std::find(ch.begin(), ch.end(), root) == ch.end())
            return TreeViolation{"chain does not contain the root"};
        for (std::size_t a = 0; a < ch.size(); ++a)
            for (std::size_t b = a + 1; b < ch.size(); ++b)
                if (!t.base.comparable(ch[a], ch[b]))
                    return TreeViolation{"chain is not totally ordered"};
        for (int e = 0; e < n; ++e) {
            if (std::find(ch.begin(), ch.end(), e) != ch.end()) continue;
            bool extends = true;
            for (int c : ch)
                if (!t.base.comparable(e, c)) extends = false;
            if (extends)
                return TreeViolation{"chain is not maximal ('" + t.base.name_of(e) +
                                     "' extends it)"};
        }
    }
    return std::nullopt;
}

} // namespace cfpo
