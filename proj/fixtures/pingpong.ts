; Request/serve loop: a request arrives (pc 1), the server works the budget x
; down to zero (pc 2), acknowledges (pc 3), and recharges the budget before
; idling again.  Deterministic; every location is revisited forever.
(system
  (vars (x Int) (pc Int))
  (init (and (= pc 1) (>= x 0)))
  (trans
    (rule (= pc 1) ((x x) (pc 2)))
    (rule (and (= pc 2) (> x 0)) ((x (- x 1)) (pc 2)))
    (rule (and (= pc 2) (<= x 0)) ((x x) (pc 3)))
    (rule (= pc 3) ((x (+ x 2)) (pc 1)))))
