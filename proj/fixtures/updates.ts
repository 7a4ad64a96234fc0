; Input loop with a havoc update: pc 1 reads an arbitrary new value into u,
; pc 2 saturates it at 4, pc 3 loops back.  Exercises havoc resolution in the
; existential lane (a witness must pick concrete values for u).
(system
  (vars (u Int) (pc Int))
  (init (and (= pc 1) (>= u 0) (<= u 1)))
  (trans
    (rule (= pc 1) ((u *) (pc 2)))
    (rule (and (= pc 2) (>= u 4)) ((u 4) (pc 3)))
    (rule (and (= pc 2) (<= u 3)) ((u u) (pc 3)))
    (rule (= pc 3) ((u u) (pc 1)))))
