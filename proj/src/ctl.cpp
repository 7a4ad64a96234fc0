#include "ctlhorn/ctl.hpp"

#include <stdexcept>

namespace ctlhorn {

CtlPtr mk_ctl_atom(AssertionPtr a) {
    auto node = std::make_shared<CtlFormula>();
    node->op = CtlOp::Atom;
    node->atom = std::move(a);
    return node;
}

CtlPtr mk_pred_leaf(std::string pred_name) {
    auto node = std::make_shared<CtlFormula>();
    node->op = CtlOp::PredLeaf;
    node->pred_name = std::move(pred_name);
    return node;
}

CtlPtr mk_unary(CtlOp op, CtlPtr sub) {
    auto node = std::make_shared<CtlFormula>();
    node->op = op;
    node->lhs = std::move(sub);
    return node;
}

CtlPtr mk_binary(CtlOp op, CtlPtr lhs, CtlPtr rhs) {
    auto node = std::make_shared<CtlFormula>();
    node->op = op;
    node->lhs = std::move(lhs);
    node->rhs = std::move(rhs);
    return node;
}

CtlPtr mk_imply(AssertionPtr antecedent, CtlPtr consequent) {
    auto node = std::make_shared<CtlFormula>();
    node->op = CtlOp::Imply;
    node->atom = std::move(antecedent);
    node->lhs = std::move(consequent);
    return node;
}

CtlPtr ctl_from_assertion(const AssertionPtr& a) {
    switch (a->kind) {
        case Assertion::Kind::True:
        case Assertion::Kind::False:
        case Assertion::Kind::Atom:
            return mk_ctl_atom(a);
        case Assertion::Kind::Not:
            return ctl_from_assertion(negate_assertion(a));
        case Assertion::Kind::And:
        case Assertion::Kind::Or: {
            CtlOp op = a->kind == Assertion::Kind::And ? CtlOp::And : CtlOp::Or;
            CtlPtr acc = ctl_from_assertion(a->args.front());
            for (size_t i = 1; i < a->args.size(); ++i) {
                acc = mk_binary(op, acc, ctl_from_assertion(a->args[i]));
            }
            return acc;
        }
    }
    throw std::logic_error("ctl_from_assertion: unreachable");
}

bool is_assertion(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
            return true;
        case CtlOp::PredLeaf:
            return false;
        case CtlOp::And:
        case CtlOp::Or:
            return is_assertion(f->lhs) && is_assertion(f->rhs);
        default:
            return false;
    }
}

AssertionPtr assertion_of(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
            return f->atom;
        case CtlOp::And:
            return assr_and({assertion_of(f->lhs), assertion_of(f->rhs)});
        case CtlOp::Or:
            return assr_or({assertion_of(f->lhs), assertion_of(f->rhs)});
        default:
            throw std::logic_error("assertion_of: formula has temporal structure");
    }
}

bool ctl_eq(const CtlPtr& a, const CtlPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op) return false;
    if (a->pred_name != b->pred_name) return false;
    if ((a->atom != nullptr) != (b->atom != nullptr)) return false;
    if (a->atom && !assr_eq(a->atom, b->atom)) return false;
    if ((a->lhs != nullptr) != (b->lhs != nullptr)) return false;
    if (a->lhs && !ctl_eq(a->lhs, b->lhs)) return false;
    if ((a->rhs != nullptr) != (b->rhs != nullptr)) return false;
    if (a->rhs && !ctl_eq(a->rhs, b->rhs)) return false;
    return true;
}

int formula_size(const CtlPtr& f) {
    int n = 1;
    if (f->lhs) n += formula_size(f->lhs);
    if (f->rhs) n += formula_size(f->rhs);
    return n;
}

namespace {

const char* unary_name(CtlOp op) {
    switch (op) {
        case CtlOp::AX: return "AX";
        case CtlOp::EX: return "EX";
        case CtlOp::AG: return "AG";
        case CtlOp::EG: return "EG";
        case CtlOp::AF: return "AF";
        case CtlOp::EF: return "EF";
        default: return nullptr;
    }
}

}  // namespace

std::string to_infix(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
            return to_infix(f->atom);
        case CtlOp::PredLeaf:
            return f->pred_name;
        case CtlOp::And:
            return "(" + to_infix(f->lhs) + " && " + to_infix(f->rhs) + ")";
        case CtlOp::Or:
            return "(" + to_infix(f->lhs) + " || " + to_infix(f->rhs) + ")";
        case CtlOp::Imply:
            return "(" + to_infix(f->atom) + " -> " + to_infix(f->lhs) + ")";
        case CtlOp::AU:
            return "AU(" + to_infix(f->lhs) + ", " + to_infix(f->rhs) + ")";
        case CtlOp::EU:
            return "EU(" + to_infix(f->lhs) + ", " + to_infix(f->rhs) + ")";
        default:
            return std::string(unary_name(f->op)) + "(" + to_infix(f->lhs) + ")";
    }
}

}  // namespace ctlhorn
