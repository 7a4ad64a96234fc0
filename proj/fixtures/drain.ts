; Branching fate: from the entry the run either pumps x up forever (pc 2/3)
; or drains it to zero and parks (pc 4/5).  The choice at pc 1 is the only
; nondeterminism; each loop by itself is deterministic.
(system
  (vars (x Int) (pc Int))
  (init (and (= pc 1) (>= x 1)))
  (trans
    (rule (= pc 1) ((x x) (pc 2)))
    (rule (= pc 1) ((x x) (pc 4)))
    (rule (= pc 2) ((x (+ x 1)) (pc 3)))
    (rule (= pc 3) ((x x) (pc 2)))
    (rule (and (= pc 4) (> x 0)) ((x (- x 1)) (pc 4)))
    (rule (and (= pc 4) (<= x 0)) ((x x) (pc 5)))
    (rule (= pc 5) ((x x) (pc 5)))))
