#include "faigp/diversity.hpp"

#include <cmath>
#include <stdexcept>

namespace faigp {

namespace {
    void CountInto(Program const& p, std::array<std::size_t, kLibrarySize>& counts)
    {
        for (auto const& n : p.Nodes) {
            if (IsLibrary(n.Op) && !n.IsConstantTerm()) {
                ++counts[LibraryIndex(n.Op)];
            }
            if (n.HasSubprogram()) {
                CountInto(n.Subprogram(), counts);
            }
        }
    }

    auto XLogX(double p, double q) -> double { return p > 0.0 ? p * std::log2(q) : 0.0; }

    auto MeanOf(std::vector<OperatorRow> const& rows) -> OperatorRow
    {
        OperatorRow mean {};
        for (auto const& row : rows) {
            for (std::size_t i = 0; i < kLibrarySize; ++i) {
                mean[i] += row[i];
            }
        }
        for (auto& m : mean) {
            m /= static_cast<double>(rows.size());
        }
        return mean;
    }
} // namespace

auto FrequencyTable::FromRows(std::vector<OperatorRow> rows) -> FrequencyTable
{
    if (rows.empty()) {
        throw std::invalid_argument("frequency table needs at least one row");
    }
    FrequencyTable t;
    t.Mean = MeanOf(rows);
    t.PerExpression = std::move(rows);
    return t;
}

auto OperatorCounts(Program const& p) -> std::array<std::size_t, kLibrarySize>
{
    std::array<std::size_t, kLibrarySize> counts {};
    CountInto(p, counts);
    return counts;
}

auto OperatorFrequencies(std::span<Program const> generation, bool smoothing) -> FrequencyTable
{
    if (generation.empty()) {
        throw std::invalid_argument("operator frequencies of an empty generation");
    }
    std::vector<OperatorRow> rows;
    rows.reserve(generation.size());
    for (auto const& p : generation) {
        auto counts = OperatorCounts(p);
        OperatorRow row {};
        double total = 0.0;
        for (std::size_t i = 0; i < kLibrarySize; ++i) {
            row[i] = static_cast<double>(counts[i]) + (smoothing ? 1.0 : 0.0);
            total += row[i];
        }
        for (auto& v : row) {
            v = total > 0.0 ? v / total : 1.0 / static_cast<double>(kLibrarySize);
        }
        rows.push_back(row);
    }
    return FrequencyTable::FromRows(std::move(rows));
}

auto ShannonDiversity(FrequencyTable const& table) -> DiversityReport
{
    auto const n = table.Size();
    auto const& mean = table.Mean;
    DiversityReport r;
    r.H.resize(n);
    r.Delta.resize(n);
    r.HR.resize(n);
    r.D.resize(n);

    for (std::size_t i = 0; i < kLibrarySize; ++i) {
        if (mean[i] <= 0.0) {
            continue;
        }
        double s = 0.0;
        for (auto const& row : table.PerExpression) {
            auto const ratio = row[i] / mean[i];
            s += XLogX(ratio, ratio);
        }
        r.Specificity[i] = s / static_cast<double>(n);
    }

    for (std::size_t j = 0; j < n; ++j) {
        auto const& row = table.PerExpression[j];
        double h = 0.0;
        double hr = 0.0;
        double delta = 0.0;
        for (std::size_t i = 0; i < kLibrarySize; ++i) {
            h -= XLogX(row[i], row[i]);
            hr -= XLogX(row[i], mean[i]);
            delta += row[i] * r.Specificity[i];
        }
        r.H[j] = h;
        r.HR[j] = hr;
        r.Delta[j] = delta;
        r.D[j] = hr - h;
    }
    return r;
}

auto DotIntersection(Node const& a, Node const& b) -> std::int64_t
{
    if (a.Op != b.Op || a.Arg.index() != b.Arg.index()) {
        return 0;
    }
    if (!a.HasSubprogram()) {
        return static_cast<std::int64_t>(a.Operands().IntersectionSize(b.Operands()));
    }
    std::int64_t common = 0;
    for (auto const& x : a.Subprogram().Nodes) {
        for (auto const& y : b.Subprogram().Nodes) {
            common += static_cast<std::int64_t>(x == y);
        }
    }
    return common;
}

auto DotIntersection(Program const& a, Program const& b) -> std::int64_t
{
    std::int64_t total = 0;
    for (auto const& x : a.Nodes) {
        for (auto const& y : b.Nodes) {
            if (x.IsConstantTerm() || y.IsConstantTerm()) {
                continue;
            }
            total += DotIntersection(x, y);
        }
    }
    return total;
}

auto PairwiseDiversity(std::span<Program const> generation) -> std::vector<std::int64_t>
{
    std::vector<std::int64_t> out(generation.size(), 0);
    for (std::size_t j = 0; j < generation.size(); ++j) {
        for (std::size_t k = j; k < generation.size(); ++k) {
            auto v = DotIntersection(generation[j], generation[k]);
            out[j] += v;
            if (k != j) {
                out[k] += v;
            }
        }
    }
    return out;
}

} // namespace faigp
