#include "klab/constants.hpp"

#include "klab/errors.hpp"
#include "klab/io.hpp"

namespace klab {

nlohmann::json FrozenConstants::to_json() const {
    return nlohmann::json{
        {"card_deviation_ceiling", card_deviation_ceiling},
        {"counting_bound_factor", counting_bound_factor},
        {"theorem_b_factor", theorem_b_factor},
        {"berry_esseen_factor", berry_esseen_factor},
        {"subgaussian_c", subgaussian_c},
        {"regime_exponent", regime_exponent},
        {"moment_k2_ceiling", moment_k2_ceiling},
        {"moment_k4_ceiling", moment_k4_ceiling},
        {"moment_floor", moment_floor},
        {"theorem_a_final_ks", theorem_a_final_ks},
        {"figure1_ks_ceiling", figure1_ks_ceiling},
    };
}

FrozenConstants FrozenConstants::load(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::Io, "cannot parse constants file " + path + ": " + e.what());
    }
    FrozenConstants c = defaults();
    auto get = [&](const char* key, double& slot) {
        if (j.contains(key)) slot = j.at(key).get<double>();
    };
    get("card_deviation_ceiling", c.card_deviation_ceiling);
    get("counting_bound_factor", c.counting_bound_factor);
    get("theorem_b_factor", c.theorem_b_factor);
    get("berry_esseen_factor", c.berry_esseen_factor);
    get("subgaussian_c", c.subgaussian_c);
    get("regime_exponent", c.regime_exponent);
    get("moment_k2_ceiling", c.moment_k2_ceiling);
    get("moment_k4_ceiling", c.moment_k4_ceiling);
    get("moment_floor", c.moment_floor);
    get("theorem_a_final_ks", c.theorem_a_final_ks);
    get("figure1_ks_ceiling", c.figure1_ks_ceiling);
    return c;
}

} // namespace klab
