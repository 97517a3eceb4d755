#include "faigp/operators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "faigp/canonical.hpp"

namespace faigp {

void EngineConfig::Validate() const
{
    auto fail = [](std::string const& what) { throw std::invalid_argument(what); };
    if (PopulationSize < 2) {
        fail("population size must be at least 2");
    }
    if (ParentCount() < 1 || ParentCount() > PopulationSize) {
        fail(fmt::format("parent count {} must lie in [1, {}]", ParentCount(), PopulationSize));
    }
    if (Exponents.Min > Exponents.Max) {
        fail(fmt::format("exponent interval [{}, {}] is empty", Exponents.Min, Exponents.Max));
    }
    if (Exponents.Min == 0 && Exponents.Max == 0) {
        fail("exponent interval must contain a non-zero integer");
    }
    std::array<double, 5> const mix { Mix.Crossover, Mix.Point, Mix.Subtree, Mix.Hoist, Mix.Replication };
    double total = 0.0;
    for (auto p : mix) {
        if (!(p >= 0.0)) {
            fail("operator probabilities must be non-negative");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6) {
        fail(fmt::format("operator probabilities sum to {}, expected 1", total));
    }
    std::array<double, 4> const weights { Mutation.Coefficient, Mutation.Operands, Mutation.Operator, Mutation.Exponent };
    if (std::any_of(weights.begin(), weights.end(), [](double w) { return !(w >= 0.0); })
        || std::all_of(weights.begin(), weights.end(), [](double w) { return w == 0.0; })) {
        fail("point-mutation weights must be non-negative and not all zero");
    }
    if (TournamentSize < 1) {
        fail("tournament size must be at least 1");
    }
    if (Elitism > PopulationSize) {
        fail("elitism exceeds the population size");
    }
    if (MaxDepth < 1) {
        fail("maximum depth must be at least 1");
    }
    if (!(CoeffLo <= CoeffHi)) {
        fail("coefficient interval is empty");
    }
    if (InitialPrograms.size() > PopulationSize) {
        fail("more initial programs than population slots");
    }
}

namespace {
    template <typename P, typename N>
    void CollectInto(P& p, std::vector<N*>& out)
    {
        for (auto& n : p.Nodes) {
            out.push_back(&n);
            if (n.HasSubprogram()) {
                CollectInto(n.Subprogram(), out);
            }
        }
    }

    // Nodes paired with their nesting level (1 = root).
    void CollectLevels(Program& p, std::size_t level, std::vector<std::pair<Node*, std::size_t>>& out)
    {
        for (auto& n : p.Nodes) {
            out.emplace_back(&n, level);
            if (n.HasSubprogram()) {
                CollectLevels(n.Subprogram(), level + 1, out);
            }
        }
    }

    template <typename T>
    auto Pick(std::vector<T> const& v, Rng& rng) -> T
    {
        return v[UniformInt<std::size_t>(rng, 0, v.size() - 1)];
    }

    class Grower {
    public:
        Grower(VariationContext const& ctx, Rng& rng)
            : ctx_(ctx)
            , cfg_(ctx.Config)
            , rng_(rng)
        {
        }

        auto Coefficient() -> double { return Uniform(rng_, cfg_.CoeffLo, cfg_.CoeffHi); }

        auto Operands() -> OperandSet
        {
            OperandSet set;
            for (std::size_t v = 0; v < ctx_.Arity; ++v) {
                if (Bernoulli(rng_, cfg_.VariableProb)) {
                    set.InsertVariable(v);
                }
            }
            if (Bernoulli(rng_, cfg_.ConstantProb)) {
                set.InsertConstant(Coefficient());
            }
            if (set.Empty()) {
                if (ctx_.Arity > 0) {
                    set.InsertVariable(UniformInt<std::size_t>(rng_, 0, ctx_.Arity - 1));
                } else {
                    set.InsertConstant(Coefficient());
                }
            }
            return set;
        }

        auto SubProgram(std::size_t level, std::size_t minNodes, std::size_t maxNodes) -> Program
        {
            Program p;
            auto const count = UniformInt<std::size_t>(rng_, minNodes, maxNodes);
            for (std::size_t i = 0; i < count; ++i) {
                p.Nodes.push_back(Grow(level));
            }
            return p;
        }

        // A node living at nesting `level`.
        auto Grow(std::size_t level) -> Node
        {
            auto const canNest = level < cfg_.MaxDepth;
            auto const scale = 1.0 / static_cast<double>(level);
            if (canNest && Bernoulli(rng_, 0.25 * scale)) {
                auto const op = Bernoulli(rng_, 0.5) ? OperatorKind::Sum : OperatorKind::Prod;
                return { Coefficient(), op, SubProgram(level + 1, 2, 3), RandomExponent(cfg_.Exponents, rng_) };
            }
            auto const op = ctx_.Prior.Sample(rng_);
            if (canNest && Bernoulli(rng_, 0.2 * scale)) {
                return { Coefficient(), op, SubProgram(level + 1, 1, 2), RandomExponent(cfg_.Exponents, rng_) };
            }
            return { Coefficient(), op, Operands(), RandomExponent(cfg_.Exponents, rng_) };
        }

    private:
        VariationContext const& ctx_;
        EngineConfig const& cfg_;
        Rng& rng_;
    };

    auto Finish(Program p, VariationContext const& ctx) -> Program
    {
        return Canonicalize(std::move(p), ctx.Config.Exponents);
    }

    void MutateOperands(OperandSet& set, VariationContext const& ctx, Rng& rng)
    {
        Grower grow(ctx, rng);
        auto addOne = [&] {
            std::vector<std::size_t> missing;
            for (std::size_t v = 0; v < ctx.Arity; ++v) {
                if (std::find(set.Variables().begin(), set.Variables().end(), v) == set.Variables().end()) {
                    missing.push_back(v);
                }
            }
            if (!missing.empty() && Bernoulli(rng, 0.5)) {
                set.InsertVariable(Pick(missing, rng));
            } else {
                set.InsertConstant(grow.Coefficient());
            }
        };
        auto removeOne = [&] {
            auto const k = UniformInt<std::size_t>(rng, 0, set.Size() - 1);
            if (k < set.Variables().size()) {
                set.EraseVariable(set.Variables()[k]);
            } else {
                set.EraseConstant(set.Constants()[k - set.Variables().size()]);
            }
        };
        switch (UniformInt(rng, 0, 2)) {
        case 0:
            addOne();
            break;
        case 1:
            if (set.Size() > 1) {
                removeOne();
            } else {
                addOne();
            }
            break;
        default: {
            auto const before = set;
            removeOne();
            addOne();
            if (set.Empty()) {
                set = before;
            }
            break;
        }
        }
    }

    void MutateChildren(Program& sub, std::size_t level, VariationContext const& ctx, Rng& rng)
    {
        Grower grow(ctx, rng);
        auto const choice = UniformInt(rng, 0, 2);
        if (choice == 0 || sub.Nodes.empty()) {
            sub.Nodes.push_back(grow.Grow(level));
        } else if (choice == 1 && sub.Size() > 1) {
            sub.Nodes.erase(sub.Nodes.begin() + static_cast<std::ptrdiff_t>(UniformInt<std::size_t>(rng, 0, sub.Size() - 1)));
        } else {
            sub.Nodes[UniformInt<std::size_t>(rng, 0, sub.Size() - 1)] = grow.Grow(level);
        }
    }

    auto WithinDepth(Program const& p, VariationContext const& ctx) -> bool { return Depth(p) <= ctx.Config.MaxDepth; }

    constexpr int kCrossoverAttempts = 16;

    auto ValidNode(Node const& n, ExponentRange range, std::size_t level, std::size_t maxDepth) -> bool;

    auto ValidProgram(Program const& p, ExponentRange range, std::size_t level, std::size_t maxDepth) -> bool
    {
        if (p.Empty() || level > maxDepth) {
            return false;
        }
        return std::all_of(p.Nodes.begin(), p.Nodes.end(),
            [&](Node const& n) { return ValidNode(n, range, level, maxDepth); });
    }

    auto ValidNode(Node const& n, ExponentRange range, std::size_t level, std::size_t maxDepth) -> bool
    {
        if (!std::isfinite(n.Coeff) || (n.Exponent != 0 && !range.Contains(n.Exponent))) {
            return false;
        }
        if (n.HasSubprogram()) {
            return ValidProgram(n.Subprogram(), range, level + 1, maxDepth);
        }
        if (IsStructural(n.Op)) {
            return false;
        }
        auto const& set = n.Operands();
        return !set.Empty()
            && std::all_of(set.Constants().begin(), set.Constants().end(), [](double c) { return !std::isnan(c); });
    }
} // namespace

auto CollectNodes(Program& p) -> std::vector<Node*>
{
    std::vector<Node*> out;
    CollectInto(p, out);
    return out;
}

auto CollectNodes(Program const& p) -> std::vector<Node const*>
{
    std::vector<Node const*> out;
    CollectInto(p, out);
    return out;
}

auto RandomExponent(ExponentRange range, Rng& rng) -> int
{
    if (range.Contains(1) && Bernoulli(rng, 0.1)) {
        return 1;
    }
    auto const zeroInside = range.Contains(0);
    auto const span = range.Max - range.Min + 1 - (zeroInside ? 1 : 0);
    if (span <= 0) {
        return 0;
    }
    auto k = UniformInt(rng, range.Min, range.Min + span - 1);
    if (zeroInside && k >= 0) {
        ++k;
    }
    return k;
}

auto GenerateRandomProgram(VariationContext const& ctx, Rng& rng) -> Program
{
    Grower grow(ctx, rng);
    return Finish(grow.SubProgram(1, 1, std::max<std::size_t>(1, ctx.Config.MaxRootNodes)), ctx);
}

auto PointMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program
{
    Program out = p;
    std::vector<std::pair<Node*, std::size_t>> nodes;
    CollectLevels(out, 1, nodes);
    if (nodes.empty()) {
        return out;
    }
    auto [node, level] = Pick(nodes, rng);

    auto const& w = ctx.Config.Mutation;
    std::discrete_distribution<int> element({ w.Coefficient, w.Operands, w.Operator, w.Exponent });
    switch (element(rng)) {
    case 0: {
        auto const& fit = ctx.Fit;
        node->Coeff += fit.PerturbLo == fit.PerturbHi ? fit.PerturbLo : Uniform(rng, fit.PerturbLo, fit.PerturbHi);
        break;
    }
    case 1:
        if (node->HasSubprogram()) {
            MutateChildren(node->Subprogram(), level + 1, ctx, rng);
        } else {
            MutateOperands(node->Operands(), ctx, rng);
        }
        break;
    case 2:
        if (IsStructural(node->Op)) {
            node->Op = node->Op == OperatorKind::Sum ? OperatorKind::Prod : OperatorKind::Sum;
        } else {
            node->Op = ctx.Prior.Sample(rng);
        }
        break;
    default:
        if (!node->IsConstantTerm()) {
            node->Exponent = RandomExponent(ctx.Config.Exponents, rng);
        }
        break;
    }
    auto result = Finish(std::move(out), ctx);
    return WithinDepth(result, ctx) ? result : p;
}

auto Crossover(Program const& p1, Program const& p2, VariationContext const& ctx, Rng& rng) -> Program
{
    if (SetEqual(p1, p2)) {
        return p1;
    }
    Program donor = p2;
    auto const donors = CollectNodes(donor);
    for (int attempt = 0; attempt < kCrossoverAttempts; ++attempt) {
        Program child = p1;
        auto const targets = CollectNodes(child);
        auto* target = Pick(targets, rng);
        auto const* source = Pick(donors, rng);
        if (Bernoulli(rng, 0.5)) {
            *target = *source;
        } else {
            // Arguments: sum/prod only take sub-programs; library operators
            // take either kind.
            if (IsStructural(target->Op) && !source->HasSubprogram()) {
                continue;
            }
            target->Arg = source->Arg;
        }
        auto result = Finish(std::move(child), ctx);
        if (WithinDepth(result, ctx)) {
            return result;
        }
    }
    return p1;
}

auto SubtreeMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program
{
    auto donor = GenerateRandomProgram(ctx, rng);
    return Crossover(p, donor, ctx, rng);
}

auto HoistMutation(Program const& p, VariationContext const& ctx, Rng& rng) -> Program
{
    Program out = p;
    std::vector<Node*> nested;
    for (auto* n : CollectNodes(out)) {
        if (n->HasSubprogram()) {
            nested.push_back(n);
        }
    }
    if (nested.empty()) {
        return out;
    }
    auto* segment = Pick(nested, rng);
    auto const inner = CollectNodes(segment->Subprogram());
    Node hoisted = *Pick(inner, rng);
    *segment = std::move(hoisted);
    return Finish(std::move(out), ctx);
}

auto IsValidProgram(Program const& p, ExponentRange range, std::size_t maxDepth) -> bool
{
    return ValidProgram(p, range, 1, maxDepth);
}

} // namespace faigp
