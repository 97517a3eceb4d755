#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "faigp/expr.hpp"

namespace faigp {

class DatasetError : public std::runtime_error {
public:
    // `line` is the 1-based physical line of the offending input and `row`
    // the 1-based data row below the header (0 when not applicable).
    DatasetError(std::string const& message, std::size_t line = 0, std::size_t row = 0);

    [[nodiscard]] auto Line() const noexcept -> std::size_t { return line_; }
    [[nodiscard]] auto Row() const noexcept -> std::size_t { return row_; }

private:
    std::size_t line_;
    std::size_t row_;
};

struct Provenance {
    std::string Source;                 // benchmark name or file path
    bool ExternalFile { false };
    std::optional<std::uint64_t> Seed;
    double NoiseLambda { 0.0 };
    double NoiseVariance { 0.0 };       // λ·σ_f² actually injected
};

// Sample points with inputs stored column-major.
class Dataset {
public:
    Dataset() = default;
    // `x` is column-major with `arity` columns of y.size() rows each.
    Dataset(std::vector<double> x, std::vector<double> y, std::size_t arity, Provenance provenance = {});

    [[nodiscard]] auto Rows() const noexcept -> std::size_t { return y_.size(); }
    [[nodiscard]] auto Arity() const noexcept -> std::size_t { return arity_; }
    [[nodiscard]] auto View() const noexcept -> DataView { return { x_, y_.size(), arity_ }; }
    [[nodiscard]] auto X() const noexcept -> std::vector<double> const& { return x_; }
    [[nodiscard]] auto Y() const noexcept -> std::vector<double> const& { return y_; }
    [[nodiscard]] auto Column(std::size_t var) const -> std::span<double const> { return View().Column(var); }
    [[nodiscard]] auto Point(std::size_t row) const -> std::vector<double>;
    [[nodiscard]] auto Source() const noexcept -> Provenance const& { return provenance_; }

    auto WithTargets(std::vector<double> y) const -> Dataset;
    auto WithProvenance(Provenance provenance) const -> Dataset;

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::size_t arity_ { 0 };
    Provenance provenance_;
};

// Header "x1[,x2,...],y", one point per row, decimal-dot floats. Throws
// DatasetError naming the offending line.
auto ReadCsv(std::istream& in, std::string const& sourceName = "<stream>") -> Dataset;
auto ReadCsv(std::filesystem::path const& path) -> Dataset;
auto WriteCsv(std::ostream& out, Dataset const& data) -> void;

} // namespace faigp
