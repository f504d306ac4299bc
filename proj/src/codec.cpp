#include "forage/codec.hpp"

#include <sstream>
#include <stdexcept>

namespace forage {

namespace {
constexpr int kOffsets[kGroupCount] = {0, 4, 5, 6, 10, 11};
constexpr int kSpans[kGroupCount] = {4, 1, 1, 4, 1, 4};
constexpr const char* kNames[kGroupCount] = {"compass",   "holding",
                                             "nearfood",  "nestlight",
                                             "pheromone", "robotproximity"};
} // namespace

const std::array<ChannelGroup, kGroupCount> kAllGroups = {
    ChannelGroup::Compass,   ChannelGroup::HoldingFood,
    ChannelGroup::NearFood,  ChannelGroup::NestLight,
    ChannelGroup::Pheromone, ChannelGroup::RobotProximity};

int group_offset(ChannelGroup g) { return kOffsets[static_cast<int>(g)]; }
int group_span(ChannelGroup g) { return kSpans[static_cast<int>(g)]; }

std::string group_name(ChannelGroup g) { return kNames[static_cast<int>(g)]; }

std::string canonical_group_names() {
    std::string out;
    for (int i = 0; i < kGroupCount; ++i) {
        if (i) out += ", ";
        out += kNames[i];
    }
    return out;
}

ChannelGroup group_from_name(const std::string& name) {
    for (int i = 0; i < kGroupCount; ++i)
        if (name == kNames[i]) return static_cast<ChannelGroup>(i);
    throw std::invalid_argument("unknown channel group '" + name +
                                "' (valid: " + canonical_group_names() + ")");
}

AblationMask& AblationMask::disable(ChannelGroup g, double replacement) {
    groups[static_cast<std::size_t>(g)] = GroupMask{false, replacement};
    return *this;
}

AblationMask& AblationMask::enable(ChannelGroup g) {
    groups[static_cast<std::size_t>(g)] = GroupMask{true, 0.0};
    return *this;
}

bool AblationMask::is_enabled(ChannelGroup g) const {
    return groups[static_cast<std::size_t>(g)].enabled;
}

AblationMask parse_mask(const std::string& text) {
    AblationMask mask;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::stringstream part(item);
        std::string name, state, constant;
        std::getline(part, name, ':');
        std::getline(part, state, ':');
        std::getline(part, constant, ':');
        ChannelGroup g = group_from_name(name);
        if (state == "on" || state.empty()) {
            mask.enable(g);
        } else if (state == "off") {
            double c = 0.0;
            if (!constant.empty()) {
                std::size_t used = 0;
                c = std::stod(constant, &used);
                if (used != constant.size())
                    throw std::invalid_argument("mask: bad constant '" + constant + "'");
            }
            mask.disable(g, c);
        } else {
            throw std::invalid_argument("mask: expected on/off, got '" + state + "'");
        }
    }
    return mask;
}

std::string format_mask(const AblationMask& mask) {
    std::string out;
    for (int i = 0; i < kGroupCount; ++i) {
        if (!out.empty()) out += ",";
        const GroupMask& gm = mask.groups[static_cast<std::size_t>(i)];
        out += kNames[i];
        if (gm.enabled) {
            out += ":on";
        } else {
            out += ":off:";
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%g", gm.replacement);
            out += buf;
        }
    }
    return out;
}

std::array<double, kChannelCount> encode_sensors(const SensorFrame& frame,
                                                 const AblationMask& mask) {
    std::array<double, kChannelCount> channels = frame.channels();
    for (int g = 0; g < kGroupCount; ++g) {
        const GroupMask& gm = mask.groups[static_cast<std::size_t>(g)];
        if (gm.enabled) continue;
        for (int k = 0; k < kSpans[g]; ++k)
            channels[static_cast<std::size_t>(kOffsets[g] + k)] = gm.replacement;
    }
    return channels;
}

ActuatorCommand decode_actuators(std::span<const double> outputs,
                                 double pheromone_threshold) {
    if (outputs.size() != 3)
        throw std::invalid_argument("decode_actuators: expected 3 outputs");
    for (double o : outputs)
        if (!(o >= 0.0 && o <= 1.0))
            throw std::invalid_argument("decode_actuators: output outside [0,1]");
    ActuatorCommand cmd;
    cmd.left_speed = (outputs[0] - 0.5) * 32.0;
    cmd.right_speed = (outputs[1] - 0.5) * 32.0;
    cmd.lay_pheromone = outputs[2] > pheromone_threshold;
    return cmd;
}

void ControllerConfig::validate() const {
    if (passes < 1) throw std::invalid_argument("controller: passes must be >= 1");
    if (!(sigmoid_slope > 0.0))
        throw std::invalid_argument("controller: sigmoid_slope must be > 0");
    if (!(pheromone_threshold >= 0.0 && pheromone_threshold <= 1.0))
        throw std::invalid_argument("controller: pheromone_threshold must be in [0,1]");
}

ActuatorCommand control_tick(const Network& net, NetworkState& state,
                             const WorldState& world, std::size_t robot_index,
                             const AblationMask& mask,
                             const ControllerConfig& controller) {
    const SensorFrame frame = sense(world, robot_index);
    const std::array<double, kChannelCount> inputs = encode_sensors(frame, mask);
    double outputs[3];
    net.evaluate_into(state, inputs, controller.passes, outputs);
    return decode_actuators(outputs, controller.pheromone_threshold);
}

} // namespace forage
