#include "planbench/domains.hpp"

namespace planbench {

namespace {

// Standard IPC-2000 4-operator blocksworld.
constexpr std::string_view kBlocksworld = R"((define (domain blocksworld-4ops)
  (:requirements :strips)
  (:predicates (clear ?x) (ontable ?x) (handempty) (holding ?x) (on ?x ?y))
  (:action pick-up
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (holding ?x) (not (ontable ?x)) (not (clear ?x)) (not (handempty))))
  (:action put-down
    :parameters (?x)
    :precondition (and (holding ?x))
    :effect (and (clear ?x) (handempty) (ontable ?x) (not (holding ?x))))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (clear ?x) (handempty) (on ?x ?y) (not (holding ?x)) (not (clear ?y))))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
)";

// IPC-1998 logistics, STRIPS version.
constexpr std::string_view kLogistics = R"((define (domain logistics-strips)
  (:requirements :strips)
  (:predicates (OBJ ?obj) (TRUCK ?truck) (LOCATION ?loc) (AIRPLANE ?airplane) (CITY ?city)
               (AIRPORT ?airport) (at ?obj ?loc) (in ?obj1 ?obj2) (in-city ?obj ?city))
  (:action load-truck
    :parameters (?obj ?truck ?loc)
    :precondition (and (OBJ ?obj) (TRUCK ?truck) (LOCATION ?loc) (at ?truck ?loc) (at ?obj ?loc))
    :effect (and (in ?obj ?truck) (not (at ?obj ?loc))))
  (:action load-airplane
    :parameters (?obj ?airplane ?loc)
    :precondition (and (OBJ ?obj) (AIRPLANE ?airplane) (LOCATION ?loc) (at ?obj ?loc) (at ?airplane ?loc))
    :effect (and (in ?obj ?airplane) (not (at ?obj ?loc))))
  (:action unload-truck
    :parameters (?obj ?truck ?loc)
    :precondition (and (OBJ ?obj) (TRUCK ?truck) (LOCATION ?loc) (at ?truck ?loc) (in ?obj ?truck))
    :effect (and (at ?obj ?loc) (not (in ?obj ?truck))))
  (:action unload-airplane
    :parameters (?obj ?airplane ?loc)
    :precondition (and (OBJ ?obj) (AIRPLANE ?airplane) (LOCATION ?loc) (in ?obj ?airplane) (at ?airplane ?loc))
    :effect (and (at ?obj ?loc) (not (in ?obj ?airplane))))
  (:action drive-truck
    :parameters (?truck ?loc-from ?loc-to ?city)
    :precondition (and (TRUCK ?truck) (LOCATION ?loc-from) (LOCATION ?loc-to) (CITY ?city)
                       (at ?truck ?loc-from) (in-city ?loc-from ?city) (in-city ?loc-to ?city))
    :effect (and (at ?truck ?loc-to) (not (at ?truck ?loc-from))))
  (:action fly-airplane
    :parameters (?airplane ?loc-from ?loc-to)
    :precondition (and (AIRPLANE ?airplane) (AIRPORT ?loc-from) (AIRPORT ?loc-to) (at ?airplane ?loc-from))
    :effect (and (at ?airplane ?loc-to) (not (at ?airplane ?loc-from)))))
)";

// AIPS-1998 grid with a single arm. The held key is named explicitly so
// that key swaps stay within STRIPS.
constexpr std::string_view kGrid = R"((define (domain grid)
  (:requirements :strips)
  (:predicates (conn ?x ?y) (key-shape ?k ?s) (lock-shape ?x ?s) (at ?r ?x) (at-robot ?x)
               (place ?p) (key ?k) (shape ?s) (locked ?x) (holding ?k) (open ?x) (arm-empty))
  (:action unlock
    :parameters (?curpos ?lockpos ?key ?shape)
    :precondition (and (place ?curpos) (place ?lockpos) (key ?key) (shape ?shape) (conn ?curpos ?lockpos)
                       (key-shape ?key ?shape) (lock-shape ?lockpos ?shape) (at-robot ?curpos)
                       (locked ?lockpos) (holding ?key))
    :effect (and (open ?lockpos) (not (locked ?lockpos))))
  (:action move
    :parameters (?curpos ?nextpos)
    :precondition (and (place ?curpos) (place ?nextpos) (at-robot ?curpos) (conn ?curpos ?nextpos) (open ?nextpos))
    :effect (and (at-robot ?nextpos) (not (at-robot ?curpos))))
  (:action pickup
    :parameters (?curpos ?key)
    :precondition (and (place ?curpos) (key ?key) (at-robot ?curpos) (at ?key ?curpos) (arm-empty))
    :effect (and (holding ?key) (not (at ?key ?curpos)) (not (arm-empty))))
  (:action pickup-and-loose
    :parameters (?curpos ?newkey ?oldkey)
    :precondition (and (place ?curpos) (key ?newkey) (key ?oldkey) (at-robot ?curpos) (holding ?oldkey)
                       (at ?newkey ?curpos))
    :effect (and (holding ?newkey) (at ?oldkey ?curpos) (not (holding ?oldkey)) (not (at ?newkey ?curpos)))))
)";

std::string_view source(DomainId id) {
    switch (id) {
        case DomainId::blocksworld: return kBlocksworld;
        case DomainId::logistics: return kLogistics;
        case DomainId::grid: return kGrid;
    }
    return {};
}

}  // namespace

std::string_view domain_name(DomainId id) {
    switch (id) {
        case DomainId::blocksworld: return "blocksworld-4ops";
        case DomainId::logistics: return "logistics-strips";
        case DomainId::grid: return "grid";
    }
    return {};
}

std::string_view domain_key(DomainId id) {
    switch (id) {
        case DomainId::blocksworld: return "bw";
        case DomainId::logistics: return "logistics";
        case DomainId::grid: return "minigrid";
    }
    return {};
}

std::optional<DomainId> domain_from_name(std::string_view name) {
    for (DomainId id : kAllDomains)
        if (name == domain_name(id) || name == domain_key(id)) return id;
    if (name == "blocksworld") return DomainId::blocksworld;
    return std::nullopt;
}

const Domain& builtin_domain(DomainId id) {
    static const std::array<Domain, 3> kDomains{parse_domain(kBlocksworld), parse_domain(kLogistics),
                                               parse_domain(kGrid)};
    return kDomains[static_cast<std::size_t>(id)];
}

std::string builtin_domain_pddl(DomainId id) { return std::string(source(id)) + "\n"; }

}  // namespace planbench
