; Data-driven fork: the sign of t at the entry decides which of two
; non-terminating branches the run enters (t climbing at pc 2, t sinking at
; pc 3).  Which branch wins is a property of the initial state, not of any
; scheduler choice.
(system
  (vars (t Int) (pc Int))
  (init (and (= pc 1) (>= t -2) (<= t 2)))
  (trans
    (rule (and (= pc 1) (>= t 1)) ((t t) (pc 2)))
    (rule (and (= pc 1) (<= t 0)) ((t t) (pc 3)))
    (rule (= pc 2) ((t (+ t 1)) (pc 2)))
    (rule (= pc 3) ((t (- t 1)) (pc 3)))))
