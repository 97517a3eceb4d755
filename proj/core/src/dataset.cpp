#include "faigp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include <fmt/format.h>

#include "faigp/syntax.hpp"

namespace faigp {

namespace {
    auto Locate(std::string const& message, std::size_t line, std::size_t row) -> std::string
    {
        if (row > 0) {
            return fmt::format("row {} (line {}): {}", row, line, message);
        }
        return line > 0 ? fmt::format("line {}: {}", line, message) : message;
    }
} // namespace

DatasetError::DatasetError(std::string const& message, std::size_t line, std::size_t row)
    : std::runtime_error(Locate(message, line, row))
    , line_(line)
    , row_(row)
{
}

Dataset::Dataset(std::vector<double> x, std::vector<double> y, std::size_t arity, Provenance provenance)
    : x_(std::move(x))
    , y_(std::move(y))
    , arity_(arity)
    , provenance_(std::move(provenance))
{
    if (x_.size() != arity_ * y_.size()) {
        throw DatasetError(fmt::format("input matrix holds {} values, expected {} x {}", x_.size(), arity_, y_.size()));
    }
    if (y_.size() < 2) {
        throw DatasetError("a dataset needs at least two points");
    }
}

auto Dataset::Point(std::size_t row) const -> std::vector<double>
{
    std::vector<double> point(arity_);
    for (std::size_t v = 0; v < arity_; ++v) {
        point[v] = x_[v * y_.size() + row];
    }
    return point;
}

auto Dataset::WithTargets(std::vector<double> y) const -> Dataset
{
    return { x_, std::move(y), arity_, provenance_ };
}

auto Dataset::WithProvenance(Provenance provenance) const -> Dataset
{
    return { x_, y_, arity_, std::move(provenance) };
}

namespace {
    auto Trim(std::string_view s) -> std::string_view
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
            s.remove_prefix(1);
        }
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
            s.remove_suffix(1);
        }
        return s;
    }

    auto SplitFields(std::string_view line) -> std::vector<std::string_view>
    {
        std::vector<std::string_view> fields;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            fields.push_back(Trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
            if (comma == std::string_view::npos) {
                return fields;
            }
            start = comma + 1;
        }
    }

    auto ParseDouble(std::string_view field) -> std::optional<double>
    {
        if (!field.empty() && field.front() == '+') {
            field.remove_prefix(1);
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (field.empty() || ec != std::errc {} || ptr != field.data() + field.size()) {
            return std::nullopt;
        }
        return value;
    }
} // namespace

auto ReadCsv(std::istream& in, std::string const& sourceName) -> Dataset
{
    std::string line;
    std::size_t lineNo = 0;
    std::optional<std::size_t> arity;
    std::vector<std::vector<double>> columns;
    std::vector<double> y;

    while (std::getline(in, line)) {
        ++lineNo;
        auto text = Trim(line);
        if (lineNo == 1 && text.starts_with("\xEF\xBB\xBF")) {
            text.remove_prefix(3);
        }
        if (text.empty()) {
            continue;
        }
        auto fields = SplitFields(text);
        if (!arity) {
            if (fields.size() < 2) {
                throw DatasetError("header must name at least one input column and 'y'", lineNo);
            }
            for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
                if (fields[i] != fmt::format("x{}", i + 1)) {
                    throw DatasetError(fmt::format("header column {} must be 'x{}', got '{}'", i + 1, i + 1, fields[i]), lineNo);
                }
            }
            if (fields.back() != "y") {
                throw DatasetError(fmt::format("last header column must be 'y', got '{}'", fields.back()), lineNo);
            }
            arity = fields.size() - 1;
            columns.resize(*arity);
            continue;
        }
        auto const row = y.size() + 1;
        if (fields.size() != *arity + 1) {
            throw DatasetError(fmt::format("expected {} fields, got {}", *arity + 1, fields.size()), lineNo, row);
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            auto v = ParseDouble(fields[i]);
            if (!v) {
                throw DatasetError(fmt::format("field {} ('{}') is not a number", i + 1, fields[i]), lineNo, row);
            }
            if (!std::isfinite(*v)) {
                throw DatasetError(fmt::format("field {} ('{}') is not finite", i + 1, fields[i]), lineNo, row);
            }
            if (i < *arity) {
                columns[i].push_back(*v);
            } else {
                y.push_back(*v);
            }
        }
    }
    if (!arity) {
        throw DatasetError("empty file: missing header");
    }
    if (y.size() < 2) {
        throw DatasetError(fmt::format("{} holds {} data rows, at least 2 are required", sourceName, y.size()));
    }
    std::vector<double> x;
    x.reserve(*arity * y.size());
    for (auto const& c : columns) {
        x.insert(x.end(), c.begin(), c.end());
    }
    Provenance prov;
    prov.Source = sourceName;
    prov.ExternalFile = true;
    return { std::move(x), std::move(y), *arity, std::move(prov) };
}

auto ReadCsv(std::filesystem::path const& path) -> Dataset
{
    std::ifstream in(path);
    if (!in) {
        throw DatasetError(fmt::format("cannot open '{}'", path.string()));
    }
    return ReadCsv(in, path.string());
}

auto WriteCsv(std::ostream& out, Dataset const& data) -> void
{
    for (std::size_t v = 0; v < data.Arity(); ++v) {
        out << 'x' << v + 1 << ',';
    }
    out << "y\n";
    for (std::size_t r = 0; r < data.Rows(); ++r) {
        for (std::size_t v = 0; v < data.Arity(); ++v) {
            out << FormatNumber(data.Column(v)[r]) << ',';
        }
        out << FormatNumber(data.Y()[r]) << '\n';
    }
}

} // namespace faigp
