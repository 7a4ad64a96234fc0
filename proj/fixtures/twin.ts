; Two sustainable behaviors: the run may idle at pc 1 forever, or move to
; pc 2 and push y up from then on.  Both continuations exist from the initial
; state, so existential and universal properties diverge sharply here.
(system
  (vars (y Int) (pc Int))
  (init (and (= pc 1) (= y 0)))
  (trans
    (rule (= pc 1) ((y y) (pc 1)))
    (rule (= pc 1) ((y (+ y 1)) (pc 2)))
    (rule (= pc 2) ((y (+ y 1)) (pc 2)))))
