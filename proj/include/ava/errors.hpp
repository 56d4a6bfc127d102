#pragma once

#include <stdexcept>
#include <string>

namespace ava {

// Every domain failure derives from Error and carries a stable machine-readable code.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define AVA_DEFINE_ERROR(Name, code_text)                                   \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& message) : Error(code_text, message) {} \
    }

AVA_DEFINE_ERROR(InvalidConfig, "invalid_config");
AVA_DEFINE_ERROR(InvalidParams, "invalid_params");
AVA_DEFINE_ERROR(MissingAssessment, "missing_assessment");
AVA_DEFINE_ERROR(WrongAssessmentKind, "wrong_assessment_kind");
AVA_DEFINE_ERROR(UnknownStructure, "unknown_structure");
AVA_DEFINE_ERROR(SizeMismatch, "size_mismatch");
AVA_DEFINE_ERROR(IoError, "io_error");
AVA_DEFINE_ERROR(ImageError, "image_error");
AVA_DEFINE_ERROR(EmptyPointSet, "empty_point_set");
AVA_DEFINE_ERROR(MissingPosition, "missing_position");
AVA_DEFINE_ERROR(BadParams, "bad_params");
AVA_DEFINE_ERROR(OverlappingBands, "overlapping_bands");
AVA_DEFINE_ERROR(ToolUnreachable, "tool_unreachable");
AVA_DEFINE_ERROR(BindError, "bind_error");
AVA_DEFINE_ERROR(AuthError, "auth_error");
AVA_DEFINE_ERROR(RateLimited, "rate_limited");
AVA_DEFINE_ERROR(PerceptionError, "perception_error");

#undef AVA_DEFINE_ERROR

class MissingField : public Error {
public:
    explicit MissingField(std::string field)
        : Error("missing_field", "unbound template placeholder: " + field), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class ProviderError : public Error {
public:
    ProviderError(int status, const std::string& message)
        : Error("provider_error", message), status_(status) {}
    int status() const noexcept { return status_; }

private:
    int status_;
};

// Wire-level failure. protocol_code() is the code the peer reported (or a local one).
class ProtocolError : public Error {
public:
    ProtocolError(std::string protocol_code, const std::string& message)
        : Error("protocol_error", message), protocol_code_(std::move(protocol_code)) {}
    const std::string& protocol_code() const noexcept { return protocol_code_; }

private:
    std::string protocol_code_;
};

}  // namespace ava
