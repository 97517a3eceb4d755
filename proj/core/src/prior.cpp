#include "faigp/prior.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace faigp {

OperatorPrior::OperatorPrior()
{
    probs_.fill(1.0 / static_cast<double>(kLibrarySize));
}

OperatorPrior::OperatorPrior(std::array<double, kLibrarySize> probs)
    : probs_(probs)
{
    double total = 0.0;
    for (std::size_t i = 0; i < kLibrarySize; ++i) {
        auto const p = probs_[i];
        if (!std::isfinite(p) || p < 0.0) {
            throw PriorError(fmt::format("prior probability for '{}' must be a finite non-negative number, got {}",
                Name(kLibrary[i]), p));
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kTolerance) {
        throw PriorError(fmt::format("prior probabilities sum to {}, expected 1", total));
    }
}

auto OperatorPrior::Degenerate(OperatorKind op) -> OperatorPrior
{
    if (!IsLibrary(op)) {
        throw PriorError(fmt::format("'{}' is not a library operator", Name(op)));
    }
    std::array<double, kLibrarySize> probs {};
    probs[LibraryIndex(op)] = 1.0;
    return OperatorPrior(probs);
}

auto OperatorPrior::FromJson(std::string_view text) -> OperatorPrior
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (nlohmann::json::parse_error const& e) {
        throw PriorError(fmt::format("prior is not valid JSON: {}", e.what()));
    }
    if (!doc.is_object()) {
        throw PriorError("prior must be a JSON object mapping operator names to probabilities");
    }
    std::array<double, kLibrarySize> probs {};
    for (auto const& [key, value] : doc.items()) {
        auto op = OperatorFromName(key);
        if (!op || !IsLibrary(*op)) {
            throw PriorError(fmt::format("unknown operator '{}' in prior", key));
        }
        if (!value.is_number()) {
            throw PriorError(fmt::format("prior value for '{}' is not a number", key));
        }
        probs[LibraryIndex(*op)] = value.get<double>();
    }
    return OperatorPrior(probs);
}

auto OperatorPrior::Load(std::filesystem::path const& path) -> OperatorPrior
{
    std::ifstream in(path);
    if (!in) {
        throw PriorError(fmt::format("cannot open prior file '{}'", path.string()));
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return FromJson(buffer.str());
}

auto OperatorPrior::ToJson() const -> std::string
{
    nlohmann::ordered_json doc = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < kLibrarySize; ++i) {
        doc[std::string(Name(kLibrary[i]))] = probs_[i];
    }
    return doc.dump(2);
}

auto OperatorPrior::Sample(Rng& rng) const -> OperatorKind
{
    std::discrete_distribution<std::size_t> dist(probs_.begin(), probs_.end());
    return kLibrary[dist(rng)];
}

} // namespace faigp
