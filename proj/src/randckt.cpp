#include "sna/randckt.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <vector>

namespace sna {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }
    bool chance(int percent) { return below(100) < percent; }

private:
    std::mt19937_64 engine_;
};

class Dsu {
public:
    explicit Dsu(int n) : parent_(n)
    {
        for (int i = 0; i < n; ++i) {
            parent_[i] = i;
        }
    }

    int find(int x)
    {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    /// Folds a's component into b's root and returns that root.
    int unite(int a, int b)
    {
        const int root = find(b);
        parent_[find(a)] = root;
        return root;
    }

private:
    std::vector<int> parent_;
};

/// Builds one random circuit in phases: a connected spanning tree, extra
/// independent elements (with all loop handling), then controlled voltage
/// sources, then controlled current sources. The phase order plus the
/// sensed-component registries below keep every control dependency pointing
/// at an earlier source, so the control substitution system is always
/// triangular and the analysis never has to reject the circuit.
struct Builder {
    GenOptions opt;
    Rng rng;
    Circuit circuit;
    int node_count;
    /// Components of the voltage-source subgraph, controlled outputs
    /// included; guards loop creation.
    Dsu vgroups;
    /// Components whose node voltages some earlier source senses; later
    /// controlled voltage outputs must not reshape their offsets.
    std::vector<char> sensed_voltage;
    /// Components holding a current-sensed voltage source; later taped
    /// current sources must not feed its cut.
    std::vector<char> sensed_current;
    int next_id = 1;
    int next_symbol = 1;
    /// Indices of independent voltage sources, for loop injection.
    std::vector<std::size_t> vsources;

    Builder(const GenOptions& options, int nodes)
        : opt(options), rng(options.seed), node_count(nodes), vgroups(nodes),
          sensed_voltage(nodes, 0), sensed_current(nodes, 0)
    {
    }

    static NodeId node(int i) { return std::to_string(i); }

    int merge(int a, int b)
    {
        const int ra = vgroups.find(a);
        const int root = vgroups.unite(a, b);
        sensed_voltage[root] |= sensed_voltage[ra];
        sensed_current[root] |= sensed_current[ra];
        return root;
    }

    bool voltage_sensed(int n) { return sensed_voltage[vgroups.find(n)] != 0; }
    bool current_sensed(int n) { return sensed_current[vgroups.find(n)] != 0; }
    void mark_voltage_sensed(int n) { sensed_voltage[vgroups.find(n)] = 1; }
    void mark_current_sensed(int n) { sensed_current[vgroups.find(n)] = 1; }

    Value admittance_value()
    {
        if (opt.symbolic_values) {
            return Value{Symbol("G" + std::to_string(next_symbol++))};
        }
        return Value{Rational(1 + rng.below(4), 1 + rng.below(3))};
    }

    Value source_value(const char* prefix)
    {
        if (opt.symbolic_values) {
            return Value{Symbol(prefix + std::to_string(next_symbol++))};
        }
        return Value{Rational(rng.below(7) - 3, 1 + rng.below(2))};
    }

    Value gain_value()
    {
        int numerator = rng.below(6) - 3;
        if (numerator >= 0) {
            ++numerator;
        }
        return Value{Rational(numerator, 1 + rng.below(2))};
    }

    void add_two_terminal(ElementKind kind, char letter, int pos, int neg, Value value)
    {
        Element e;
        e.id = letter + std::to_string(next_id++);
        e.kind = kind;
        e.pos = node(pos);
        e.neg = node(neg);
        e.value = std::move(value);
        circuit.elements.push_back(std::move(e));
    }

    void add_admittance(int a, int b)
    {
        add_two_terminal(ElementKind::Admittance, 'Y', a, b, admittance_value());
    }

    void add_vsource(int a, int b, Value value)
    {
        add_two_terminal(ElementKind::VSource, 'V', a, b, std::move(value));
        vsources.push_back(circuit.elements.size() - 1);
        merge(a, b);
    }

    /// Potentials over the independent voltage sources reachable from
    /// `start`; a node absent from the result has no all-independent path.
    std::map<NodeId, Poly> independent_potentials(const NodeId& start)
    {
        std::map<NodeId, std::vector<std::size_t>> adjacency;
        for (const std::size_t i : vsources) {
            const Element& e = circuit.elements[i];
            adjacency[e.pos].push_back(i);
            adjacency[e.neg].push_back(i);
        }
        std::map<NodeId, Poly> potential;
        potential.emplace(start, Poly::zero());
        std::deque<NodeId> frontier{start};
        while (!frontier.empty()) {
            NodeId at = frontier.front();
            frontier.pop_front();
            for (const std::size_t i : adjacency[at]) {
                const Element& e = circuit.elements[i];
                const NodeId& next = e.pos == at ? e.neg : e.pos;
                if (potential.count(next)) {
                    continue;
                }
                const Poly value = value_poly(*e.value);
                potential.emplace(next, e.pos == at ? potential.at(at) - value
                                                    : potential.at(at) + value);
                frontier.push_back(next);
            }
        }
        return potential;
    }

    std::pair<int, int> random_pair()
    {
        const int a = rng.below(node_count);
        int b = rng.below(node_count);
        if (a == b) {
            b = (b + 1) % node_count;
        }
        return {a, b};
    }

    void spanning_tree()
    {
        for (int k = 1; k < node_count; ++k) {
            const int parent = rng.below(k);
            int pos = k;
            int neg = parent;
            if (rng.chance(50)) {
                std::swap(pos, neg);
            }
            const int roll = rng.below(100);
            const bool admittance = k == 1 || (opt.admittances_only ? roll < 75 : roll < 55);
            if (admittance) {
                add_admittance(pos, neg);
            } else if (!opt.admittances_only && opt.allow_vsources && roll < 80) {
                add_vsource(pos, neg, source_value("vs"));
            } else {
                add_two_terminal(ElementKind::ISource, 'I', pos, neg, source_value("is"));
            }
        }
    }

    void extra_vsource(int a, int b)
    {
        if (vgroups.find(a) != vgroups.find(b)) {
            add_vsource(a, b, source_value("vs"));
            return;
        }
        if (opt.allow_consistent_loops && !opt.symbolic_values) {
            const auto potential = independent_potentials(node(a));
            const auto it = potential.find(node(b));
            if (it != potential.end()) {
                add_vsource(a, b, Value{-it->second.constant_value()});
                return;
            }
        }
        add_admittance(a, b);
    }

    void add_vcvs()
    {
        const auto [cp, cn] = sense_nodes();
        emit_voltage_output(ElementKind::VCVS, 'E', [&](Element& e) {
            e.control_nodes = std::make_pair(node(cp), node(cn));
        });
    }

    std::pair<int, int> sense_nodes()
    {
        const int cp = rng.below(node_count);
        const int cn = rng.below(node_count);
        mark_voltage_sensed(cp);
        mark_voltage_sensed(cn);
        return {cp, cn};
    }

    std::vector<std::size_t> admittance_indices() const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < circuit.elements.size(); ++i) {
            if (circuit.elements[i].kind == ElementKind::Admittance) {
                out.push_back(i);
            }
        }
        return out;
    }

    /// Emits a controlled voltage source whose output avoids loops and
    /// every sensed component, or an admittance when no placement fits.
    template <typename Configure>
    void emit_voltage_output(ElementKind kind, char letter, Configure configure)
    {
        for (int attempt = 0; attempt < 8; ++attempt) {
            const auto [a, b] = random_pair();
            if (vgroups.find(a) == vgroups.find(b) || voltage_sensed(a) || voltage_sensed(b)
                || current_sensed(a) || current_sensed(b)) {
                continue;
            }
            Element e;
            e.id = letter + std::to_string(next_id++);
            e.kind = kind;
            e.pos = node(a);
            e.neg = node(b);
            e.value = gain_value();
            configure(e);
            circuit.elements.push_back(std::move(e));
            merge(a, b);
            return;
        }
        const auto [a, b] = random_pair();
        add_admittance(a, b);
    }

    void add_ccvs()
    {
        const auto admittances = admittance_indices();
        const Element& target = circuit.elements[admittances[rng.below(
            static_cast<int>(admittances.size()))]];
        const std::string target_id = target.id;
        mark_voltage_sensed(std::stoi(target.pos));
        mark_voltage_sensed(std::stoi(target.neg));
        emit_voltage_output(ElementKind::CCVS, 'H', [&](Element& e) {
            e.control_element = target_id;
        });
    }

    void add_vccs()
    {
        for (int attempt = 0; attempt < 8; ++attempt) {
            const auto [a, b] = random_pair();
            if (current_sensed(a) || current_sensed(b)) {
                continue;
            }
            Element e;
            e.id = "G" + std::to_string(next_id++);
            e.kind = ElementKind::VCCS;
            e.pos = node(a);
            e.neg = node(b);
            e.control_nodes = std::make_pair(node(rng.below(node_count)),
                                             node(rng.below(node_count)));
            e.value = gain_value();
            circuit.elements.push_back(std::move(e));
            return;
        }
        const auto [a, b] = random_pair();
        add_admittance(a, b);
    }

    void add_cccs(bool vsource_controls)
    {
        std::string target_id;
        if (vsource_controls && rng.chance(40)) {
            std::vector<std::size_t> eligible;
            for (const std::size_t i : vsources) {
                if (!current_sensed(std::stoi(circuit.elements[i].pos))) {
                    eligible.push_back(i);
                }
            }
            if (!eligible.empty()) {
                const Element& target =
                    circuit.elements[eligible[rng.below(static_cast<int>(eligible.size()))]];
                target_id = target.id;
                mark_current_sensed(std::stoi(target.pos));
            }
        }
        if (target_id.empty()) {
            const auto admittances = admittance_indices();
            target_id = circuit.elements[admittances[rng.below(
                                             static_cast<int>(admittances.size()))]]
                            .id;
        }
        for (int attempt = 0; attempt < 8; ++attempt) {
            const auto [a, b] = random_pair();
            if (current_sensed(a) || current_sensed(b)) {
                continue;
            }
            Element e;
            e.id = "F" + std::to_string(next_id++);
            e.kind = ElementKind::CCCS;
            e.pos = node(a);
            e.neg = node(b);
            e.control_element = target_id;
            e.value = gain_value();
            circuit.elements.push_back(std::move(e));
            return;
        }
        const auto [a, b] = random_pair();
        add_admittance(a, b);
    }
};

}  // namespace

Circuit random_circuit(const GenOptions& options)
{
    GenOptions opt = options;
    const bool forcing = opt.force_loop || opt.inject_violation;
    if (forcing) {
        opt.allow_controlled = false;
    }
    const bool loops_possible = opt.allow_consistent_loops || forcing;
    const bool vsource_controls = opt.control_through_vsource && !loops_possible;

    Rng sizing(opt.seed ^ 0x5bf0363546e92021ull);
    int node_count = 2 + sizing.below(std::max(1, opt.max_nodes - 1));
    node_count = std::min(node_count, opt.max_elements + 1);

    Builder b(opt, node_count);
    b.circuit.ground = "0";
    b.spanning_tree();

    const int reserved = forcing ? 2 : 0;
    const int room = std::max(0, opt.max_elements - (node_count - 1) - reserved);
    const int extras = room ? b.rng.below(room + 1) : 0;

    int voltage_controlled = 0;
    int current_controlled = 0;
    for (int i = 0; i < extras; ++i) {
        int roll = b.rng.below(100);
        if (opt.admittances_only) {
            roll = roll < 60 ? 0 : 35;
        } else if (!opt.allow_controlled && roll >= 70) {
            roll = b.rng.below(70);
        } else if (!opt.allow_vsources && roll >= 50 && roll < 70) {
            roll = b.rng.below(50);
        }
        if (roll < 35) {
            const auto [a, c] = b.random_pair();
            b.add_admittance(a, c);
        } else if (roll < 50) {
            const auto [a, c] = b.random_pair();
            b.add_two_terminal(ElementKind::ISource, 'I', a, c, b.source_value("is"));
        } else if (roll < 70) {
            const auto [a, c] = b.random_pair();
            b.extra_vsource(a, c);
        } else if (roll < 86) {
            ++voltage_controlled;
        } else {
            ++current_controlled;
        }
    }

    for (int i = 0; i < voltage_controlled; ++i) {
        if (b.rng.chance(50)) {
            b.add_vcvs();
        } else {
            b.add_ccvs();
        }
    }
    for (int i = 0; i < current_controlled; ++i) {
        if (b.rng.chance(55)) {
            b.add_vccs();
        } else {
            b.add_cccs(vsource_controls);
        }
    }

    if (forcing) {
        if (b.vsources.empty()) {
            b.add_vsource(0, 1, b.source_value("vs"));
        }
        const Element& base =
            b.circuit.elements[b.vsources[b.rng.below(static_cast<int>(b.vsources.size()))]];
        const NodeId pos = base.pos;
        const NodeId neg = base.neg;
        Value chord = *base.value;
        if (opt.inject_violation) {
            if (opt.symbolic_values) {
                chord = b.source_value("vs");
            } else {
                chord = Value{numeric_value(chord) + 1};
            }
        }
        Element e;
        e.id = "V" + std::to_string(b.next_id++);
        e.kind = ElementKind::VSource;
        e.pos = pos;
        e.neg = neg;
        e.value = std::move(chord);
        b.circuit.elements.push_back(std::move(e));
    }

    refresh_nodes(b.circuit);
    return b.circuit;
}

}  // namespace sna
