#include "ctlhorn/normalize.hpp"

namespace ctlhorn {

namespace {

bool is_true_atom(const CtlPtr& f) {
    return f->op == CtlOp::Atom && f->atom->kind == Assertion::Kind::True;
}

}  // namespace

CtlPtr normalize(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
        case CtlOp::PredLeaf:
            return f;
        case CtlOp::Imply: {
            CtlPtr neg = ctl_from_assertion(negate_assertion(f->atom));
            return mk_binary(CtlOp::Or, neg, normalize(f->lhs));
        }
        case CtlOp::AF:
            return mk_binary(CtlOp::AU, mk_ctl_atom(assr_true()), normalize(f->lhs));
        case CtlOp::EF:
            return mk_binary(CtlOp::EU, mk_ctl_atom(assr_true()), normalize(f->lhs));
        case CtlOp::And:
        case CtlOp::Or:
        case CtlOp::AU:
        case CtlOp::EU:
            return mk_binary(f->op, normalize(f->lhs), normalize(f->rhs));
        case CtlOp::AX:
        case CtlOp::EX:
        case CtlOp::AG:
        case CtlOp::EG:
            return mk_unary(f->op, normalize(f->lhs));
    }
    return f;
}

CtlPtr negate_formula(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
            return ctl_from_assertion(negate_assertion(f->atom));
        case CtlOp::PredLeaf:
            throw std::logic_error("cannot negate a predicate reference");
        case CtlOp::And:
            return mk_binary(CtlOp::Or, negate_formula(f->lhs), negate_formula(f->rhs));
        case CtlOp::Or:
            return mk_binary(CtlOp::And, negate_formula(f->lhs), negate_formula(f->rhs));
        case CtlOp::Imply:
            // !(c -> f) = c && !f
            return mk_binary(CtlOp::And, ctl_from_assertion(f->atom), negate_formula(f->lhs));
        case CtlOp::AX:
            return mk_unary(CtlOp::EX, negate_formula(f->lhs));
        case CtlOp::EX:
            return mk_unary(CtlOp::AX, negate_formula(f->lhs));
        case CtlOp::AG:
            return mk_unary(CtlOp::EF, negate_formula(f->lhs));
        case CtlOp::EF:
            return mk_unary(CtlOp::AG, negate_formula(f->lhs));
        case CtlOp::AF:
            return mk_unary(CtlOp::EG, negate_formula(f->lhs));
        case CtlOp::EG:
            return mk_unary(CtlOp::AF, negate_formula(f->lhs));
        case CtlOp::AU:
            if (is_true_atom(f->lhs)) {
                return mk_unary(CtlOp::EG, negate_formula(f->rhs));
            }
            throw NonNegatableUntil("cannot negate AU with non-trivial invariant: " + to_infix(f));
        case CtlOp::EU:
            if (is_true_atom(f->lhs)) {
                return mk_unary(CtlOp::AG, negate_formula(f->rhs));
            }
            throw NonNegatableUntil("cannot negate EU with non-trivial invariant: " + to_infix(f));
    }
    return f;
}

bool is_normalized(const CtlPtr& f) {
    switch (f->op) {
        case CtlOp::Atom:
        case CtlOp::PredLeaf:
            return true;
        case CtlOp::AF:
        case CtlOp::EF:
        case CtlOp::Imply:
            return false;
        case CtlOp::And:
        case CtlOp::Or:
        case CtlOp::AU:
        case CtlOp::EU:
            return is_normalized(f->lhs) && is_normalized(f->rhs);
        case CtlOp::AX:
        case CtlOp::EX:
        case CtlOp::AG:
        case CtlOp::EG:
            return is_normalized(f->lhs);
    }
    return true;
}

}  // namespace ctlhorn
