#include "causent/causal_graph.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

namespace causent {

// ---------------------------------------------------------------------------
// CausalStructure

void CausalStructure::add_node(GraphNode n)
{
    if (by_name_.count(n.name))
        throw error("duplicate node '" + n.name + "'");
    by_name_[n.name] = int(nodes_.size());
    nodes_.push_back(std::move(n));
}

void CausalStructure::add_edge(int parent, int child)
{
    if (parent == child)
        throw error("self-loop on '" + nodes_[parent].name + "'");
    if (has_edge(parent, child))
        throw error("duplicate edge " + nodes_[parent].name + " -> " + nodes_[child].name);
    edges_.emplace_back(parent, child);
}

bool CausalStructure::has_edge(int parent, int child) const
{
    for (auto [p, c] : edges_)
        if (p == parent && c == child)
            return true;
    return false;
}

CausalStructure::CausalStructure(
    std::string name,
    std::vector<std::pair<std::string, Role>> nodes,
    std::vector<std::pair<std::string, std::string>> edges,
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> subsystem_labels)
{
    this->name = std::move(name);
    for (auto& [n, role] : nodes)
        add_node(GraphNode{n, role, {}, false});
    for (auto& [p, c] : edges)
        add_edge(index(p), index(c));
    for (auto& [label, pc] : subsystem_labels) {
        int p = index(pc.first), c = index(pc.second);
        if (!has_edge(p, c))
            throw error("subsystem '" + label + "' names a missing edge");
        subsystems_.push_back(Subsystem{label, p, {c}});
    }
    finalize();
}

int CausalStructure::index(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        throw error("unknown node '" + name + "'");
    return it->second;
}

std::optional<int> CausalStructure::find(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        return std::nullopt;
    return it->second;
}

std::vector<int> CausalStructure::parents_of(int v) const
{
    std::vector<int> out;
    for (auto [p, c] : edges_)
        if (c == v)
            out.push_back(p);
    return out;
}

std::vector<int> CausalStructure::children_of(int v) const
{
    std::vector<int> out;
    for (auto [p, c] : edges_)
        if (p == v)
            out.push_back(c);
    return out;
}

std::vector<int> CausalStructure::topological_order() const
{
    std::vector<int> indeg(nodes_.size(), 0), order;
    for (auto [p, c] : edges_)
        ++indeg[c];
    std::deque<int> ready;
    for (int v = 0; v < node_count(); ++v)
        if (indeg[v] == 0)
            ready.push_back(v);
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        order.push_back(v);
        for (int c : children_of(v))
            if (--indeg[c] == 0)
                ready.push_back(c);
    }
    if (int(order.size()) != node_count())
        throw error("cycle detected in structure '" + name + "'");
    return order;
}

void CausalStructure::finalize()
{
    topological_order();  // acyclicity

    // Exactly one subsystem per unobserved-source edge; auto-label the rest.
    std::set<std::pair<int, int>> covered;
    std::set<std::string> labels;
    for (const auto& sub : subsystems_) {
        if (nodes_[sub.source].role != Role::unobserved)
            throw error("subsystem '" + sub.label + "' on an observed-source edge");
        if (!labels.insert(sub.label).second)
            throw error("duplicate subsystem label '" + sub.label + "'");
        if (by_name_.count(sub.label))
            throw error("subsystem label '" + sub.label + "' clashes with a node name");
        for (int c : sub.children)
            if (!covered.insert({sub.source, c}).second)
                throw error("edge " + nodes_[sub.source].name + " -> " + nodes_[c].name +
                            " carries two subsystems");
    }
    for (auto [p, c] : edges_) {
        if (nodes_[p].role != Role::unobserved || covered.count({p, c}))
            continue;
        std::string label = nodes_[p].name + "_" + nodes_[c].name;
        if (labels.count(label) || by_name_.count(label))
            throw error("auto subsystem label '" + label + "' collides; name it explicitly");
        labels.insert(label);
        covered.insert({p, c});
        subsystems_.push_back(Subsystem{label, p, {c}});
    }
    std::sort(subsystems_.begin(), subsystems_.end(),
              [](const Subsystem& a, const Subsystem& b) { return a.label < b.label; });
}

bool CausalStructure::has_unobserved() const
{
    for (const auto& n : nodes_)
        if (n.role == Role::unobserved)
            return true;
    return false;
}

std::vector<std::string> CausalStructure::observed_names() const
{
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        if (n.role == Role::observed)
            out.push_back(n.name);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::string> CausalStructure::node_names() const
{
    std::vector<std::string> out;
    for (const auto& n : nodes_)
        out.push_back(n.name);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> CausalStructure::resolve(const NameSet& names) const
{
    std::vector<int> out;
    for (const auto& n : names)
        out.push_back(index(n));
    return out;
}

NameSet CausalStructure::descendants_closure(const std::vector<int>& x) const
{
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<int> queue(x.begin(), x.end());
    NameSet out;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int c : children_of(v))
            if (!seen[c]) {
                seen[c] = true;
                out.insert(nodes_[c].name);
                queue.push_back(c);
            }
    }
    for (int v : x)
        out.erase(nodes_[v].name);
    return out;
}

NameSet CausalStructure::ancestors_closure(const std::vector<int>& x) const
{
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<int> queue(x.begin(), x.end());
    NameSet out;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int p : parents_of(v))
            if (!seen[p]) {
                seen[p] = true;
                out.insert(nodes_[p].name);
                queue.push_back(p);
            }
    }
    for (int v : x)
        out.erase(nodes_[v].name);
    return out;
}

CausalStructure::Relations CausalStructure::relations(const NameSet& x) const
{
    auto ids = resolve(x);
    Relations rel;
    rel.ancestors = ancestors_closure(ids);
    rel.descendants = descendants_closure(ids);
    for (int v : ids)
        for (int p : parents_of(v))
            if (!x.count(nodes_[p].name))
                rel.parents.insert(nodes_[p].name);
    for (const auto& n : nodes_)
        if (!x.count(n.name) && !rel.descendants.count(n.name))
            rel.non_descendants.insert(n.name);
    return rel;
}

// Active-trail reachability (Koller & Friedman alg. 3.1), including the
// descendant-of-collider activation.
bool CausalStructure::is_d_separated(const NameSet& x, const NameSet& y, const NameSet& z) const
{
    for (const auto& n : x)
        if (y.count(n) || z.count(n))
            throw error("d-separation query sets overlap on '" + n + "'");
    for (const auto& n : y)
        if (z.count(n))
            throw error("d-separation query sets overlap on '" + n + "'");

    auto xs = resolve(x);
    auto ys = resolve(y);
    auto zs = resolve(z);

    std::vector<bool> in_z(nodes_.size(), false), z_or_anc(nodes_.size(), false);
    for (int v : zs)
        in_z[v] = z_or_anc[v] = true;
    NameSet anc = ancestors_closure(zs);
    for (const auto& n : anc)
        z_or_anc[index(n)] = true;

    enum Dir { up, down };
    std::vector<std::array<bool, 2>> visited(nodes_.size(), {false, false});
    std::deque<std::pair<int, Dir>> queue;
    for (int v : xs)
        queue.push_back({v, up});

    std::vector<bool> reachable(nodes_.size(), false);
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[v][dir])
            continue;
        visited[v][dir] = true;
        if (!in_z[v])
            reachable[v] = true;
        if (dir == up && !in_z[v]) {
            for (int p : parents_of(v))
                queue.push_back({p, up});
            for (int c : children_of(v))
                queue.push_back({c, down});
        } else if (dir == down) {
            if (!in_z[v])
                for (int c : children_of(v))
                    queue.push_back({c, down});
            if (z_or_anc[v])
                for (int p : parents_of(v))
                    queue.push_back({p, up});
        }
    }
    for (int v : ys)
        if (reachable[v])
            return false;
    return true;
}

CausalStructure CausalStructure::post_select(const std::string& node, int values) const
{
    int x = index(node);
    if (nodes_[x].role != Role::observed)
        throw error("post-selected node '" + node + "' is unobserved");
    if (!parents_of(x).empty())
        throw error("post-selected node '" + node + "' has parents");
    if (values < 2)
        throw error("post-selection needs at least 2 values");

    NameSet desc_names = descendants_closure({x});
    std::vector<int> desc, keep;
    std::vector<bool> is_desc(nodes_.size(), false);
    for (int v = 0; v < node_count(); ++v) {
        if (v == x)
            continue;
        if (desc_names.count(nodes_[v].name)) {
            desc.push_back(v);
            is_desc[v] = true;
        } else {
            keep.push_back(v);
        }
    }

    CausalStructure out;
    out.name = name + "|" + node;
    std::map<int, int> keep_id;            // old -> new
    std::map<std::pair<int, int>, int> copy_id;  // (old, value) -> new
    for (int v : keep) {
        keep_id[v] = out.node_count();
        out.add_node(nodes_[v]);
    }
    for (int v : desc) {
        for (int val = 0; val < values; ++val) {
            GraphNode n = nodes_[v];
            n.name += "|" + node + "=" + std::to_string(val);
            n.context.push_back(ContextTag{node, val});
            std::sort(n.context.begin(), n.context.end());
            copy_id[{v, val}] = out.node_count();
            out.add_node(std::move(n));
        }
    }

    for (auto [p, c] : edges_) {
        if (p == x || c == x)
            continue;  // the selector disappears
        if (!is_desc[p] && !is_desc[c])
            out.add_edge(keep_id[p], keep_id[c]);
        else if (!is_desc[p] && is_desc[c])
            for (int val = 0; val < values; ++val)
                out.add_edge(keep_id[p], copy_id[{c, val}]);
        else if (is_desc[p] && is_desc[c])
            for (int val = 0; val < values; ++val)
                out.add_edge(copy_id[{p, val}], copy_id[{c, val}]);
        // is_desc[p] && !is_desc[c] cannot happen: c would be a descendant
    }

    // Subsystems: an unchanged edge keeps its label; copies of one original
    // edge from a kept unobserved source share one subsystem wired to all
    // alternative copies; edges between copies get per-value labels.
    for (const auto& sub : subsystems_) {
        int p = sub.source;
        if (p == x)
            continue;
        if (!is_desc[p]) {
            Subsystem ns{sub.label, keep_id[p], {}};
            for (int c : sub.children) {
                if (c == x)
                    continue;
                if (!is_desc[c])
                    ns.children.push_back(keep_id[c]);
                else
                    for (int val = 0; val < values; ++val)
                        ns.children.push_back(copy_id[{c, val}]);
            }
            if (!ns.children.empty())
                out.subsystems_.push_back(std::move(ns));
        } else {
            // children of a copied source live in the same branch
            for (int val = 0; val < values; ++val) {
                Subsystem ns{sub.label + "|" + node + "=" + std::to_string(val),
                             copy_id[{p, val}], {}};
                for (int c : sub.children)
                    ns.children.push_back(copy_id[{c, val}]);
                out.subsystems_.push_back(std::move(ns));
            }
        }
    }

    // A copy is quantum-contextual when its generation, within the copied
    // subgraph, consumes a quantum system.
    for (int v : topological_order()) {
        if (!is_desc[v])
            continue;
        bool ctx = nodes_[v].quantum_contextual;
        for (int p : parents_of(v)) {
            if (nodes_[p].role == Role::unobserved)
                ctx = true;
            else if (is_desc[p] && out.nodes_[copy_id[{p, 0}]].quantum_contextual)
                ctx = true;
        }
        for (int val = 0; val < values; ++val)
            out.nodes_[copy_id[{v, val}]].quantum_contextual = ctx;
    }

    out.finalize();
    return out;
}

std::string CausalStructure::to_dsl() const
{
    std::ostringstream o;
    o << "structure " << name << " {\n";
    for (const auto& n : nodes_)
        o << "  node " << n.name << (n.role == Role::observed ? " observed" : " unobserved")
          << "\n";
    for (auto [p, c] : edges_)
        o << "  edge " << nodes_[p].name << " -> " << nodes_[c].name << "\n";
    for (const auto& sub : subsystems_)
        for (int c : sub.children)
            o << "  subsystem " << sub.label << " on " << nodes_[sub.source].name << " -> "
              << nodes_[c].name << "\n";
    o << "}\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// DSL parser

namespace {

struct Token {
    std::string text;
    int line, col;
};

struct Lexer {
    std::vector<Token> tokens;
    size_t pos = 0;

    explicit Lexer(const std::string& text)
    {
        int line = 1, col = 1;
        size_t i = 0;
        auto advance = [&](char ch) {
            if (ch == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        };
        while (i < text.size()) {
            char ch = text[i];
            if (ch == '#') {
                while (i < text.size() && text[i] != '\n')
                    advance(text[i++]);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(ch))) {
                advance(ch);
                ++i;
                continue;
            }
            int tl = line, tc = col;
            if (ch == '{' || ch == '}') {
                tokens.push_back({std::string(1, ch), tl, tc});
                advance(ch);
                ++i;
                continue;
            }
            if (ch == '-' && i + 1 < text.size() && text[i + 1] == '>') {
                tokens.push_back({"->", tl, tc});
                advance(ch);
                advance('>');
                i += 2;
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(ch))) {
                std::string word;
                while (i < text.size() &&
                       (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
                        text[i] == '|' || text[i] == '=')) {
                    word += text[i];
                    advance(text[i++]);
                }
                tokens.push_back({word, tl, tc});
                continue;
            }
            throw error("syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(col) + ": unexpected character '" + std::string(1, ch) +
                        "'");
        }
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        if (pos < tokens.size())
            throw error("syntax error at line " + std::to_string(tokens[pos].line) +
                        ", column " + std::to_string(tokens[pos].col) + ": " + what +
                        ", got '" + tokens[pos].text + "'");
        throw error("syntax error at end of input: " + what);
    }

    std::string expect_word(const std::string& what)
    {
        if (pos >= tokens.size() ||
            !std::isalpha(static_cast<unsigned char>(tokens[pos].text[0])))
            fail("expected " + what);
        return tokens[pos++].text;
    }

    void expect(const std::string& lit)
    {
        if (pos >= tokens.size() || tokens[pos].text != lit)
            fail("expected '" + lit + "'");
        ++pos;
    }

    bool peek(const std::string& lit) const
    {
        return pos < tokens.size() && tokens[pos].text == lit;
    }

    bool done() const { return pos == tokens.size(); }
};

}  // namespace

CausalStructure parse_structure(const std::string& text)
{
    Lexer lex(text);
    lex.expect("structure");
    CausalStructure s;
    s.name = lex.expect_word("structure name");
    lex.expect("{");
    while (!lex.peek("}")) {
        if (lex.peek("node")) {
            lex.expect("node");
            std::string name = lex.expect_word("node name");
            std::string role = lex.expect_word("role (observed|unobserved)");
            if (role != "observed" && role != "unobserved")
                lex.fail("expected role 'observed' or 'unobserved'");
            s.add_node(GraphNode{name, role == "observed" ? Role::observed : Role::unobserved,
                                 {}, false});
        } else if (lex.peek("edge")) {
            lex.expect("edge");
            std::string p = lex.expect_word("parent node");
            lex.expect("->");
            std::string c = lex.expect_word("child node");
            auto pi = s.find(p), ci = s.find(c);
            if (!pi)
                throw error("edge endpoint '" + p + "' names no node");
            if (!ci)
                throw error("edge endpoint '" + c + "' names no node");
            s.add_edge(*pi, *ci);
        } else if (lex.peek("subsystem")) {
            lex.expect("subsystem");
            std::string label = lex.expect_word("subsystem label");
            lex.expect("on");
            std::string p = lex.expect_word("parent node");
            lex.expect("->");
            std::string c = lex.expect_word("child node");
            auto pi = s.find(p), ci = s.find(c);
            if (!pi || !ci)
                throw error("subsystem '" + label + "' names a missing node");
            if (!s.has_edge(*pi, *ci))
                throw error("subsystem '" + label + "' names a missing edge");
            s.subsystems_.push_back(Subsystem{label, *pi, {*ci}});
        } else {
            lex.fail("expected 'node', 'edge', 'subsystem' or '}'");
        }
    }
    lex.expect("}");
    if (!lex.done())
        lex.fail("expected end of input");
    s.finalize();
    return s;
}

// ---------------------------------------------------------------------------
// Local Markov condition

std::vector<CIStatement> local_markov(const CausalStructure& s)
{
    std::vector<CIStatement> out;
    for (int v = 0; v < s.node_count(); ++v) {
        NameSet x{s.node(v).name};
        auto rel = s.relations(x);
        NameSet right;
        for (const auto& n : rel.non_descendants)
            if (!rel.parents.count(n))
                right.insert(n);
        if (right.empty())
            continue;
        out.push_back(CIStatement{x, right, rel.parents});
    }
    return out;
}

// ---------------------------------------------------------------------------
// ElementTable

ElementTable::ElementTable(const CausalStructure& s) : s_(s)
{
    for (int v = 0; v < s.node_count(); ++v)
        if (s.node(v).role == Role::observed) {
            Element e;
            e.name = s.node(v).name;
            e.birth = v;
            e.context = s.node(v).context;
            e.contextual = s.node(v).quantum_contextual;
            elems_.push_back(std::move(e));
        }
    for (const auto& sub : s.subsystems()) {
        Element e;
        e.name = sub.label;
        e.subsystem = true;
        e.birth = sub.source;
        e.deaths = sub.children;
        e.context = s.node(sub.source).context;
        e.contextual = s.node(sub.source).quantum_contextual;
        elems_.push_back(std::move(e));
    }
    std::sort(elems_.begin(), elems_.end(),
              [](const Element& a, const Element& b) { return a.name < b.name; });
    for (int i = 0; i < int(elems_.size()); ++i) {
        names_.push_back(elems_[i].name);
        by_name_[elems_[i].name] = i;
    }

    // Auxiliary graph: original nodes plus subsystem nodes; every subsystem
    // of an unobserved node is a parent of each of that node's children.
    for (int v = 0; v < s.node_count(); ++v)
        aux_.add_node(GraphNode{s.node(v).name, Role::observed, {}, false});
    for (const auto& sub : s.subsystems())
        aux_.add_node(GraphNode{sub.label, Role::observed, {}, false});
    std::set<std::pair<int, int>> seen;
    auto link = [&](const std::string& p, const std::string& c) {
        int pi = aux_.index(p), ci = aux_.index(c);
        if (seen.insert({pi, ci}).second)
            aux_.add_edge(pi, ci);
    };
    for (const auto& sub : s.subsystems()) {
        link(s.node(sub.source).name, sub.label);
        for (int c : s.children_of(sub.source))
            link(sub.label, s.node(c).name);
    }
    for (auto [p, c] : s.edges())
        if (s.node(p).role == Role::observed)
            link(s.node(p).name, s.node(c).name);
}

const ElementTable::Element& ElementTable::get(const std::string& name) const
{
    auto it = by_name_.find(name);
    if (it == by_name_.end())
        throw error("unknown element '" + name + "'");
    return elems_[it->second];
}

bool ElementTable::is_subsystem(const std::string& element) const
{
    return get(element).subsystem;
}

bool ElementTable::quantum_ancestor_of(const Element& a, const Element& b) const
{
    if (!a.subsystem)
        return false;
    NameSet anc = s_.ancestors_closure({b.birth});
    for (int d : a.deaths)
        if (d == b.birth || anc.count(s_.node(d).name))
            return true;
    return false;
}

bool ElementTable::context_conflict(const Element& a, const Element& b) const
{
    for (const auto& ta : a.context)
        for (const auto& tb : b.context)
            if (ta.selector == tb.selector && ta.value != tb.value)
                return true;
    return false;
}

bool ElementTable::coexist(const std::string& a, const std::string& b) const
{
    const Element& ea = get(a);
    const Element& eb = get(b);
    if (quantum_ancestor_of(ea, eb) || quantum_ancestor_of(eb, ea))
        return false;
    if (ea.contextual && eb.contextual && context_conflict(ea, eb))
        return false;
    return true;
}

bool ElementTable::entanglement_possible(const std::string& a, const std::string& b) const
{
    const Element& ea = get(a);
    const Element& eb = get(b);
    if (!ea.subsystem || !eb.subsystem)
        return false;
    NameSet ua, ub;
    NameSet anc_a = s_.ancestors_closure({ea.birth});
    NameSet anc_b = s_.ancestors_closure({eb.birth});
    anc_a.insert(s_.node(ea.birth).name);
    anc_b.insert(s_.node(eb.birth).name);
    for (const auto& n : anc_a)
        if (s_.node(s_.index(n)).role == Role::unobserved)
            ua.insert(n);
    for (const auto& n : anc_b)
        if (s_.node(s_.index(n)).role == Role::unobserved)
            ub.insert(n);
    for (const auto& n : ua)
        if (ub.count(n))
            return true;
    return false;
}

std::vector<NameSet> ElementTable::maximal_coexisting_sets() const
{
    int m = int(elems_.size());
    std::vector<std::vector<bool>> adj(m, std::vector<bool>(m, false));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            adj[i][j] = adj[j][i] = coexist(names_[i], names_[j]);

    // Bron-Kerbosch without pivoting; element counts are small.
    std::vector<NameSet> out;
    std::vector<int> R;
    auto bk = [&](auto&& self, std::vector<int> P, std::vector<int> X) -> void {
        if (P.empty() && X.empty()) {
            NameSet clique;
            for (int v : R)
                clique.insert(names_[v]);
            out.push_back(std::move(clique));
            return;
        }
        std::vector<int> Pcopy = P;
        for (int v : Pcopy) {
            std::vector<int> P2, X2;
            for (int u : P)
                if (adj[v][u])
                    P2.push_back(u);
            for (int u : X)
                if (adj[v][u])
                    X2.push_back(u);
            R.push_back(v);
            self(self, P2, X2);
            R.pop_back();
            P.erase(std::find(P.begin(), P.end(), v));
            X.push_back(v);
        }
    };
    std::vector<int> P(m);
    for (int i = 0; i < m; ++i)
        P[i] = i;
    bk(bk, P, {});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NameSet> ElementTable::coexisting_sets() const
{
    std::set<NameSet> closed;
    for (const auto& maximal : maximal_coexisting_sets()) {
        std::vector<std::string> v(maximal.begin(), maximal.end());
        int n = int(v.size());
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            NameSet sub;
            for (int i = 0; i < n; ++i)
                if (mask & (1u << i))
                    sub.insert(v[i]);
            closed.insert(std::move(sub));
        }
    }
    return std::vector<NameSet>(closed.begin(), closed.end());
}

bool ElementTable::aux_d_separated(const NameSet& x, const NameSet& y, const NameSet& z) const
{
    return aux_.is_d_separated(x, y, z);
}

bool ElementTable::shares_ancestry(const NameSet& a, const NameSet& b) const
{
    auto sources = [&](const NameSet& names) {
        NameSet anc;
        for (const auto& n : names) {
            anc.insert(n);
            for (const auto& p : aux_.ancestors_closure({aux_.index(n)}))
                anc.insert(p);
        }
        return anc;
    };
    NameSet sa = sources(a), sb = sources(b);
    for (const auto& n : sa)
        if (sb.count(n))
            return true;
    return false;
}

}  // namespace causent
